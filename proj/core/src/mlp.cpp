#include <algorithm>
#include <cmath>

#include "graphprobe/error.hpp"
#include "graphprobe/trainers.hpp"
#include "minibatch.hpp"

namespace graphprobe {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_input(const MlpProbeParams& params, std::span<const double> x) {
  if (x.size() != params.input_dim()) {
    throw ValidationError("MLP input has " + std::to_string(x.size()) + " entries, expected " +
                          std::to_string(params.input_dim()));
  }
}

// Forward pass that keeps the hidden pre-activations in `hidden`.
double logit_with_hidden(const MlpProbeParams& params, std::span<const double> x, std::vector<double>& hidden) {
  const std::size_t in = params.input_dim();
  const auto w = params.values();
  hidden.resize(params.hidden_dim());
  double out = params.b2();
  for (std::size_t h = 0; h < params.hidden_dim(); ++h) {
    const double* row = w.data() + h * in;
    double z = params.b1(h);
    for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
    hidden[h] = z;
    if (z > 0.0) out += params.w2(h) * z;
  }
  return out;
}

double accumulate_gradient(const MlpProbeParams& params, std::span<const double> x, std::uint8_t label,
                           std::span<double> grad, std::vector<double>& hidden) {
  const double logit = logit_with_hidden(params, x, hidden);
  const double y = label != 0 ? 1.0 : 0.0;
  const double dlogit = sigmoid(logit) - y;
  const std::size_t in = params.input_dim();
  const std::size_t hid = params.hidden_dim();
  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + hid * in;
  double* g_w2 = g_b1 + hid;
  double* g_b2 = g_w2 + hid;
  for (std::size_t h = 0; h < hid; ++h) {
    if (hidden[h] <= 0.0) continue;
    g_w2[h] += dlogit * hidden[h];
    const double dz = dlogit * params.w2(h);
    g_b1[h] += dz;
    double* row = g_w1 + h * in;
    for (std::size_t i = 0; i < in; ++i) row[i] += dz * x[i];
  }
  *g_b2 += dlogit;
  return softplus(logit) - y * logit;
}

}  // namespace

MlpProbeParams::MlpProbeParams(std::size_t input_dim, std::size_t hidden_dim)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), values_(hidden_dim * (input_dim + 2) + 1, 0.0) {
  if (input_dim == 0 || hidden_dim == 0) throw ValidationError("MLP dimensions must be at least 1");
}

MlpProbeParams MlpProbeParams::random(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
  MlpProbeParams p(input_dim, hidden_dim);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  const std::size_t layer1 = hidden_dim * (input_dim + 1);
  for (std::size_t k = 0; k < p.values_.size(); ++k) {
    const double bound = k < layer1 ? bound1 : bound2;
    p.values_[k] = rng.uniform(-bound, bound);
  }
  return p;
}

double mlp_logit(const MlpProbeParams& params, std::span<const double> x) {
  check_input(params, x);
  std::vector<double> hidden;
  return logit_with_hidden(params, x, hidden);
}

double mlp_forward(const MlpProbeParams& params, std::span<const double> x) { return sigmoid(mlp_logit(params, x)); }

double mlp_loss_gradient(const MlpProbeParams& params, std::span<const double> x, std::uint8_t label,
                         std::span<double> grad) {
  check_input(params, x);
  if (grad.size() != params.size()) throw ValidationError("gradient buffer has the wrong size");
  std::vector<double> hidden;
  return accumulate_gradient(params, x, label, grad, hidden);
}

double mlp_mean_loss(const MlpProbeParams& params, const Matrix& inputs, std::span<const std::uint8_t> labels) {
  std::vector<double> hidden;
  double total = 0.0;
  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    const double logit = logit_with_hidden(params, inputs.row(r), hidden);
    const double y = labels[r] != 0 ? 1.0 : 0.0;
    total += softplus(logit) - y * logit;
  }
  return total / static_cast<double>(inputs.rows());
}

MlpTrainResult train_mlp(const Matrix& inputs, std::span<const std::uint8_t> labels, const TrainConfig& cfg,
                         std::optional<std::size_t> hidden_dim) {
  cfg.validate();
  if (inputs.rows() != labels.size()) throw ValidationError("inputs and labels differ in length");
  if (inputs.rows() < 2) throw ValidationError("training needs at least two examples");
  if (inputs.cols() == 0) throw ValidationError("training inputs have no columns");
  bool has0 = false;
  bool has1 = false;
  for (const auto l : labels) {
    if (l > 1) throw ValidationError("labels must be 0 or 1");
    (l != 0 ? has1 : has0) = true;
  }
  if (!has0 || !has1) throw ValidationError("probe undefined: training labels contain a single class");
  if (!detail::all_finite(inputs.data())) throw ValidationError("training inputs contain a non-finite value");

  const std::size_t hidden = hidden_dim.value_or(std::max<std::size_t>(1, inputs.cols() / 2));
  std::vector<double> scratch;
  auto batch_gradient = [&](const MlpProbeParams& params) {
    return [&](std::span<const std::size_t> batch, std::span<double> grad) {
      double loss = 0.0;
      for (const std::size_t r : batch) loss += accumulate_gradient(params, inputs.row(r), labels[r], grad, scratch);
      return loss;
    };
  };

  for (const bool clip : {false, true}) {
    Rng rng(cfg.seed);
    MlpTrainResult result;
    result.params = MlpProbeParams::random(inputs.cols(), hidden, rng);
    result.initial_loss = mlp_mean_loss(result.params, inputs, labels);
    result.clipped = clip;
    if (detail::descend(result.params.values(), inputs.rows(), cfg, rng, clip, batch_gradient(result.params),
                        result.epoch_losses)) {
      return result;
    }
  }
  throw TrainingError("MLP training diverged: non-finite loss even with gradient clipping");
}

GradientCheckResult mlp_gradient_check(const MlpProbeParams& params, std::span<const double> x, std::uint8_t label,
                                       double step) {
  check_input(params, x);
  std::vector<double> analytic(params.size(), 0.0);
  std::vector<double> hidden;
  accumulate_gradient(params, x, label, analytic, hidden);

  auto pattern = [&](const MlpProbeParams& p) {
    std::vector<double> z;
    logit_with_hidden(p, x, z);
    std::vector<bool> active(z.size());
    for (std::size_t h = 0; h < z.size(); ++h) active[h] = z[h] > 0.0;
    return active;
  };
  auto loss_of = [&](const MlpProbeParams& p) {
    std::vector<double> z;
    const double logit = logit_with_hidden(p, x, z);
    const double y = label != 0 ? 1.0 : 0.0;
    return softplus(logit) - y * logit;
  };

  const auto base = pattern(params);
  GradientCheckResult result;
  MlpProbeParams probe = params;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double original = params.values()[k];
    probe.values()[k] = original + step;
    const auto plus_pattern = pattern(probe);
    const double plus = loss_of(probe);
    probe.values()[k] = original - step;
    const auto minus_pattern = pattern(probe);
    const double minus = loss_of(probe);
    probe.values()[k] = original;
    if (plus_pattern != base || minus_pattern != base) {
      ++result.skipped;
      continue;
    }
    const double numeric = (plus - minus) / (2.0 * step);
    const double denom = std::max({std::abs(analytic[k]), std::abs(numeric), 1e-6});
    result.max_relative_error = std::max(result.max_relative_error, std::abs(analytic[k] - numeric) / denom);
    ++result.checked;
  }
  return result;
}

}  // namespace graphprobe
