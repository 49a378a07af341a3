#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace graphprobe {

/// 100 * correct / total. Throws ValidationError on empty or mismatched input.
double accuracy(std::span<const std::uint8_t> preds, std::span<const std::uint8_t> labels);

/// Macro-averaged F1 over classes {0, 1}, in percent. A class that is neither
/// predicted nor present is left out of the average; otherwise a class with
/// no true positives contributes 0.
double f1(std::span<const std::uint8_t> preds, std::span<const std::uint8_t> labels);

/// Mann-Whitney AUC in percent; tied scores count one half.
/// Throws ValidationError unless both classes are present.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct Cosine {
  double value = 0.0;
  bool degenerate = false;  // a zero vector was involved; value is 0
};

Cosine cosine_similarity(std::span<const double> a, std::span<const double> b);

/// 1-based ranks with tied values sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average-rank vectors. Reduces to
/// 1 - 6 sum d^2 / (n (n^2 - 1)) without ties. Throws ValidationError for
/// length mismatch, n < 2, or a constant input.
double spearman(std::span<const double> x, std::span<const double> y);

bool is_constant(std::span<const double> values);

/// model -> metric -> value.
using ScoreTable = std::map<std::string, std::map<std::string, double>>;

struct RankedEntry {
  std::string model;
  std::string metric;
  double value = 0.0;
  std::size_t rank = 0;
};

/// Competition ranks per metric; rank 1 is the largest value.
struct RankedTable {
  std::vector<RankedEntry> rows;  // sorted by metric, then rank, then model

  const RankedEntry* find(const std::string& model, const std::string& metric) const;
};

/// Throws ValidationError when models report different metric sets.
RankedTable rank_models(const ScoreTable& scores);

}  // namespace graphprobe
