#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "graphprobe/algorithms.hpp"
#include "graphprobe/graph.hpp"
#include "graphprobe/matrix.hpp"
#include "graphprobe/random.hpp"

namespace graphprobe {

enum class OptimizerKind { sgd, adam };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string& text);

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t epochs = 200;
  std::size_t batch_size = 256;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::adam;

  /// learning_rate must be finite and >= 0 (0 freezes the parameters);
  /// epochs and batch_size must be >= 1.
  void validate() const;
};

/// Plain SGD or Adam (beta1 0.9, beta2 0.999, eps 1e-8) over a flat parameter vector.
class ParameterOptimizer {
 public:
  ParameterOptimizer(OptimizerKind kind, double learning_rate, std::size_t num_params);

  void step(std::span<double> params, std::span<const double> grad);

 private:
  OptimizerKind kind_;
  double learning_rate_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  std::size_t steps_ = 0;
};

/// Two-layer perceptron: sigmoid(w2 . relu(W1 x + b1) + b2).
///
/// Parameters live in one flat vector laid out as W1 (hidden x input,
/// row-major), b1, w2, b2 so optimizers and gradient checks can treat
/// them uniformly.
class MlpProbeParams {
 public:
  MlpProbeParams() = default;
  /// All-zero parameters.
  MlpProbeParams(std::size_t input_dim, std::size_t hidden_dim);
  /// Weights and biases uniform in +-1/sqrt(fan_in).
  static MlpProbeParams random(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t hidden_dim() const noexcept { return hidden_dim_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& w1(std::size_t h, std::size_t i) { return values_[h * input_dim_ + i]; }
  double w1(std::size_t h, std::size_t i) const { return values_[h * input_dim_ + i]; }
  double& b1(std::size_t h) { return values_[hidden_dim_ * input_dim_ + h]; }
  double b1(std::size_t h) const { return values_[hidden_dim_ * input_dim_ + h]; }
  double& w2(std::size_t h) { return values_[hidden_dim_ * (input_dim_ + 1) + h]; }
  double w2(std::size_t h) const { return values_[hidden_dim_ * (input_dim_ + 1) + h]; }
  double& b2() { return values_.back(); }
  double b2() const { return values_.back(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const MlpProbeParams&, const MlpProbeParams&) = default;

 private:
  std::size_t input_dim_ = 0;
  std::size_t hidden_dim_ = 0;
  std::vector<double> values_;
};

double mlp_logit(const MlpProbeParams& params, std::span<const double> x);
/// Probability of label 1. Throws ValidationError on a dimension mismatch.
double mlp_forward(const MlpProbeParams& params, std::span<const double> x);

/// Binary cross-entropy of one example; adds d(loss)/d(params) into `grad`.
double mlp_loss_gradient(const MlpProbeParams& params, std::span<const double> x, std::uint8_t label,
                         std::span<double> grad);

/// Mean binary cross-entropy over rows of `inputs`.
double mlp_mean_loss(const MlpProbeParams& params, const Matrix& inputs, std::span<const std::uint8_t> labels);

template <typename Params>
struct TrainResult {
  Params params;
  double initial_loss = 0.0;
  std::vector<double> epoch_losses;  // mean per-example loss of each epoch, measured before each step
  bool clipped = false;              // the run was retried with gradient clipping
};

using MlpTrainResult = TrainResult<MlpProbeParams>;

/// Minimizes mean cross-entropy by minibatch descent. Initialization and
/// per-epoch shuffles come from one generator seeded with cfg.seed, so equal
/// inputs give bit-identical parameters. hidden_dim defaults to half the
/// input width (the embedding dimension for concatenated pairs).
///
/// Throws ValidationError for fewer than two examples, a single class,
/// non-finite inputs or labels outside {0,1}; TrainingError when the loss
/// stays non-finite after a retry with the gradient norm clipped at 5.
MlpTrainResult train_mlp(const Matrix& inputs, std::span<const std::uint8_t> labels, const TrainConfig& cfg,
                         std::optional<std::size_t> hidden_dim = std::nullopt);

/// Linear map B (rank x dim) of the bilinear distance d_B^2 = |B (h_i - h_j)|^2.
struct DistanceProbeParams {
  Matrix b;

  std::size_t rank() const noexcept { return b.rows(); }
  std::size_t dim() const noexcept { return b.cols(); }

  static DistanceProbeParams random(std::size_t rank, std::size_t dim, Rng& rng);
  static DistanceProbeParams identity(std::size_t dim);
  static DistanceProbeParams zeros(std::size_t rank, std::size_t dim);

  friend bool operator==(const DistanceProbeParams&, const DistanceProbeParams&) = default;
};

double transformed_squared_distance(const DistanceProbeParams& params, std::span<const double> hi,
                                    std::span<const double> hj);

/// Sum over pairs of |d_G(i,j) - d_B(h_i,h_j)^2|.
double distance_loss(const DistanceProbeParams& params, const EmbeddingMatrix& emb,
                     std::span<const DistancePair> pairs);

/// Adds the subgradient of distance_loss into `grad` (rank x dim, row-major)
/// and returns the loss. The subgradient of |.| at 0 is taken as 0.
double distance_loss_gradient(const DistanceProbeParams& params, const EmbeddingMatrix& emb,
                              std::span<const DistancePair> pairs, std::span<double> grad);

using DistanceTrainResult = TrainResult<DistanceProbeParams>;

/// Fits B by minibatch subgradient descent on the absolute loss. Starts from
/// `init` when given, otherwise from a seeded uniform +-1/sqrt(dim) draw.
/// Throws ValidationError for no pairs or rank outside 1..dim.
DistanceTrainResult train_distance_probe(const EmbeddingMatrix& emb, std::span<const DistancePair> pairs,
                                         std::size_t rank, const TrainConfig& cfg,
                                         std::optional<DistanceProbeParams> init = std::nullopt);
DistanceTrainResult train_distance_probe(const EmbeddingMatrix& emb, const DistanceTable& table, std::size_t rank,
                                         const TrainConfig& cfg,
                                         std::optional<DistanceProbeParams> init = std::nullopt);

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // parameters or pairs excluded near a kink
};

/// Central differences against mlp_loss_gradient. Parameters whose +-step
/// perturbation flips a ReLU are skipped. Relative error is
/// |a - n| / max(|a|, |n|, 1e-6).
GradientCheckResult mlp_gradient_check(const MlpProbeParams& params, std::span<const double> x,
                                       std::uint8_t label, double step = 1e-5);

/// Central differences against distance_loss_gradient, leaving out pairs
/// whose residual |d_G - d_B^2| is within `kink` of zero.
GradientCheckResult distance_gradient_check(const DistanceProbeParams& params, const EmbeddingMatrix& emb,
                                            std::span<const DistancePair> pairs, double step = 1e-5,
                                            double kink = 1e-6);

// Checkpoints: a header line ("mlp <input> <hidden>" or "distance <rank> <dim>")
// followed by the flat parameter values, one per line, in round-trip form.

void write_checkpoint(const MlpProbeParams& params, std::ostream& out);
void write_checkpoint(const DistanceProbeParams& params, std::ostream& out);
MlpProbeParams read_mlp_checkpoint(std::istream& in);
DistanceProbeParams read_distance_checkpoint(std::istream& in);

}  // namespace graphprobe
