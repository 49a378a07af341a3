#include <cmath>

#include "graphprobe/error.hpp"
#include "graphprobe/trainers.hpp"

namespace graphprobe {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;

}  // namespace

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer_kind(const std::string& text) {
  if (text == "sgd") return OptimizerKind::sgd;
  if (text == "adam") return OptimizerKind::adam;
  throw ValidationError("unknown optimizer '" + text + "'");
}

void TrainConfig::validate() const {
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw ValidationError("learning rate must be finite and non-negative");
  }
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (batch_size < 1) throw ValidationError("batch size must be at least 1");
}

ParameterOptimizer::ParameterOptimizer(OptimizerKind kind, double learning_rate, std::size_t num_params)
    : kind_(kind), learning_rate_(learning_rate) {
  if (kind_ == OptimizerKind::adam) {
    first_moment_.assign(num_params, 0.0);
    second_moment_.assign(num_params, 0.0);
  }
}

void ParameterOptimizer::step(std::span<double> params, std::span<const double> grad) {
  ++steps_;
  if (kind_ == OptimizerKind::sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= learning_rate_ * grad[i];
    return;
  }
  const double t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(kBeta1, t);
  const double correction2 = 1.0 - std::pow(kBeta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    first_moment_[i] = kBeta1 * first_moment_[i] + (1.0 - kBeta1) * grad[i];
    second_moment_[i] = kBeta2 * second_moment_[i] + (1.0 - kBeta2) * grad[i] * grad[i];
    const double m_hat = first_moment_[i] / correction1;
    const double v_hat = second_moment_[i] / correction2;
    params[i] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + kEpsilon);
  }
}

}  // namespace graphprobe
