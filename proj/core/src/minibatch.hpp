#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "graphprobe/random.hpp"
#include "graphprobe/trainers.hpp"

namespace graphprobe::detail {

inline constexpr double kClipNorm = 5.0;

inline bool all_finite(std::span<const double> values) {
  for (const double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// Euclidean norm that stays finite for entries near the overflow threshold.
inline double scaled_norm(std::span<const double> values) {
  double largest = 0.0;
  for (const double v : values) largest = std::max(largest, std::abs(v));
  if (largest == 0.0) return 0.0;
  double sum = 0.0;
  for (const double v : values) sum += (v / largest) * (v / largest);
  return largest * std::sqrt(sum);
}

/// Shared minibatch loop. `batch_gradient(indices, grad)` adds the summed
/// gradient of the listed examples into grad and returns their summed loss.
/// Records the mean per-example loss of each epoch (measured before each
/// step). Returns false as soon as a loss, gradient or parameter goes
/// non-finite.
template <typename BatchGradient>
bool descend(std::span<double> params, std::size_t num_examples, const TrainConfig& cfg, Rng& rng, bool clip,
             BatchGradient&& batch_gradient, std::vector<double>& epoch_losses) {
  ParameterOptimizer optimizer(cfg.optimizer, cfg.learning_rate, params.size());
  std::vector<std::size_t> order(num_examples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad(params.size());
  const std::span<const std::size_t> all(order);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < num_examples; start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, num_examples - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double loss = batch_gradient(all.subspan(start, len), std::span<double>(grad));
      if (!std::isfinite(loss) || !all_finite(grad)) return false;
      epoch_loss += loss;
      const double scale = 1.0 / static_cast<double>(len);
      for (double& g : grad) g *= scale;
      if (clip) {
        const double norm = scaled_norm(grad);
        if (norm > kClipNorm) {
          for (double& g : grad) g = (g / norm) * kClipNorm;
        }
      }
      optimizer.step(params, grad);
      if (!all_finite(params)) return false;
    }
    epoch_losses.push_back(epoch_loss / static_cast<double>(num_examples));
  }
  return true;
}

}  // namespace graphprobe::detail
