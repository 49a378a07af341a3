#include <algorithm>
#include <cmath>

#include "graphprobe/error.hpp"
#include "graphprobe/trainers.hpp"
#include "minibatch.hpp"

namespace graphprobe {
namespace {

void check_shapes(const DistanceProbeParams& params, const EmbeddingMatrix& emb) {
  if (params.dim() != emb.dim()) {
    throw ValidationError("distance probe expects dimension " + std::to_string(params.dim()) + ", embeddings have " +
                          std::to_string(emb.dim()));
  }
}

// Residual d_G - d_B^2 for one pair; fills `diff` with h_i - h_j and `mapped` with B diff.
double residual(const DistanceProbeParams& params, const EmbeddingMatrix& emb, const DistancePair& pair,
                std::vector<double>& diff, std::vector<double>& mapped) {
  const auto hi = emb.row(pair.i);
  const auto hj = emb.row(pair.j);
  const std::size_t dim = params.dim();
  diff.resize(dim);
  for (std::size_t c = 0; c < dim; ++c) diff[c] = hi[c] - hj[c];
  mapped.resize(params.rank());
  double sq = 0.0;
  for (std::size_t r = 0; r < params.rank(); ++r) {
    const auto row = params.b.row(r);
    double u = 0.0;
    for (std::size_t c = 0; c < dim; ++c) u += row[c] * diff[c];
    mapped[r] = u;
    sq += u * u;
  }
  return static_cast<double>(pair.distance) - sq;
}

double accumulate(const DistanceProbeParams& params, const EmbeddingMatrix& emb, const DistancePair& pair,
                  std::span<double> grad, std::vector<double>& diff, std::vector<double>& mapped) {
  const double r = residual(params, emb, pair, diff, mapped);
  if (r != 0.0) {
    // d|d - s|/ds = -sign(d - s), ds/dB = 2 (B diff) diff^T
    const double coeff = r > 0.0 ? -2.0 : 2.0;
    const std::size_t dim = params.dim();
    for (std::size_t row = 0; row < params.rank(); ++row) {
      const double a = coeff * mapped[row];
      double* g = grad.data() + row * dim;
      for (std::size_t c = 0; c < dim; ++c) g[c] += a * diff[c];
    }
  }
  return std::abs(r);
}

}  // namespace

DistanceProbeParams DistanceProbeParams::random(std::size_t rank, std::size_t dim, Rng& rng) {
  DistanceProbeParams p{Matrix(rank, dim)};
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& v : p.b.data()) v = rng.uniform(-bound, bound);
  return p;
}

DistanceProbeParams DistanceProbeParams::identity(std::size_t dim) {
  DistanceProbeParams p{Matrix(dim, dim)};
  for (std::size_t i = 0; i < dim; ++i) p.b(i, i) = 1.0;
  return p;
}

DistanceProbeParams DistanceProbeParams::zeros(std::size_t rank, std::size_t dim) {
  return DistanceProbeParams{Matrix(rank, dim)};
}

double transformed_squared_distance(const DistanceProbeParams& params, std::span<const double> hi,
                                    std::span<const double> hj) {
  if (hi.size() != params.dim() || hj.size() != params.dim()) {
    throw ValidationError("embedding dimension does not match the distance probe");
  }
  double sq = 0.0;
  for (std::size_t r = 0; r < params.rank(); ++r) {
    const auto row = params.b.row(r);
    double u = 0.0;
    for (std::size_t c = 0; c < params.dim(); ++c) u += row[c] * (hi[c] - hj[c]);
    sq += u * u;
  }
  return sq;
}

double distance_loss(const DistanceProbeParams& params, const EmbeddingMatrix& emb,
                     std::span<const DistancePair> pairs) {
  check_shapes(params, emb);
  std::vector<double> diff;
  std::vector<double> mapped;
  double total = 0.0;
  for (const auto& pair : pairs) total += std::abs(residual(params, emb, pair, diff, mapped));
  return total;
}

double distance_loss_gradient(const DistanceProbeParams& params, const EmbeddingMatrix& emb,
                              std::span<const DistancePair> pairs, std::span<double> grad) {
  check_shapes(params, emb);
  if (grad.size() != params.rank() * params.dim()) throw ValidationError("gradient buffer has the wrong size");
  std::vector<double> diff;
  std::vector<double> mapped;
  double total = 0.0;
  for (const auto& pair : pairs) total += accumulate(params, emb, pair, grad, diff, mapped);
  return total;
}

DistanceTrainResult train_distance_probe(const EmbeddingMatrix& emb, std::span<const DistancePair> pairs,
                                         std::size_t rank, const TrainConfig& cfg,
                                         std::optional<DistanceProbeParams> init) {
  cfg.validate();
  if (pairs.empty()) throw ValidationError("distance probe needs at least one node pair");
  if (rank < 1 || rank > emb.dim()) {
    throw ValidationError("probe rank " + std::to_string(rank) + " outside 1.." + std::to_string(emb.dim()));
  }
  if (init && (init->rank() != rank || init->dim() != emb.dim())) {
    throw ValidationError("initial distance probe has the wrong shape");
  }
  for (const auto& p : pairs) {
    if (p.i >= emb.num_nodes() || p.j >= emb.num_nodes()) throw ValidationError("pair references a missing node");
  }

  std::vector<double> diff;
  std::vector<double> mapped;
  for (const bool clip : {false, true}) {
    Rng rng(cfg.seed);
    DistanceTrainResult result;
    result.params = init ? *init : DistanceProbeParams::random(rank, emb.dim(), rng);
    result.initial_loss = distance_loss(result.params, emb, pairs) / static_cast<double>(pairs.size());
    result.clipped = clip;
    auto batch_gradient = [&](std::span<const std::size_t> batch, std::span<double> grad) {
      double loss = 0.0;
      for (const std::size_t k : batch) loss += accumulate(result.params, emb, pairs[k], grad, diff, mapped);
      return loss;
    };
    if (detail::descend(result.params.b.data(), pairs.size(), cfg, rng, clip, batch_gradient, result.epoch_losses)) {
      return result;
    }
  }
  throw TrainingError("distance probe training diverged: non-finite loss even with gradient clipping");
}

DistanceTrainResult train_distance_probe(const EmbeddingMatrix& emb, const DistanceTable& table, std::size_t rank,
                                         const TrainConfig& cfg, std::optional<DistanceProbeParams> init) {
  return train_distance_probe(emb, std::span<const DistancePair>(table.pairs), rank, cfg, std::move(init));
}

GradientCheckResult distance_gradient_check(const DistanceProbeParams& params, const EmbeddingMatrix& emb,
                                            std::span<const DistancePair> pairs, double step, double kink) {
  check_shapes(params, emb);
  std::vector<double> diff;
  std::vector<double> mapped;
  GradientCheckResult result;
  std::vector<DistancePair> kept;
  for (const auto& pair : pairs) {
    if (std::abs(residual(params, emb, pair, diff, mapped)) < kink) {
      ++result.skipped;
    } else {
      kept.push_back(pair);
    }
  }
  std::vector<double> analytic(params.rank() * params.dim(), 0.0);
  distance_loss_gradient(params, emb, kept, analytic);

  auto signs = [&](const DistanceProbeParams& p) {
    std::vector<bool> s;
    for (const auto& pair : kept) s.push_back(residual(p, emb, pair, diff, mapped) > 0.0);
    return s;
  };
  const auto base = signs(params);
  DistanceProbeParams probe = params;
  auto values = probe.b.data();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double original = values[k];
    values[k] = original + step;
    const double plus = distance_loss(probe, emb, kept);
    const bool plus_ok = signs(probe) == base;
    values[k] = original - step;
    const double minus = distance_loss(probe, emb, kept);
    const bool minus_ok = signs(probe) == base;
    values[k] = original;
    if (!plus_ok || !minus_ok) {
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
