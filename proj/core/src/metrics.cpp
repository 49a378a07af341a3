#include "graphprobe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "graphprobe/error.hpp"

namespace graphprobe {
namespace {

void check_binary_inputs(std::size_t a, std::size_t b) {
  if (a != b) throw ValidationError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  if (a == 0) throw ValidationError("empty input");
}

}  // namespace

double accuracy(std::span<const std::uint8_t> preds, std::span<const std::uint8_t> labels) {
  check_binary_inputs(preds.size(), labels.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) correct += preds[i] == labels[i] ? 1 : 0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(preds.size());
}

double f1(std::span<const std::uint8_t> preds, std::span<const std::uint8_t> labels) {
  check_binary_inputs(preds.size(), labels.size());
  double total = 0.0;
  int classes = 0;
  for (const std::uint8_t c : {std::uint8_t{0}, std::uint8_t{1}}) {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const bool p = preds[i] == c;
      const bool l = labels[i] == c;
      tp += p && l;
      fp += p && !l;
      fn += !p && l;
    }
    if (tp + fp + fn == 0) continue;
    // 2PR / (P + R) written in counts; zero when tp is zero.
    total += 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    ++classes;
  }
  return classes == 0 ? 0.0 : 100.0 * total / classes;
}

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw ValidationError("length mismatch");
  const auto ranks = average_ranks(scores);
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0) {
      positive_rank_sum += ranks[i];
      ++positives;
    }
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) throw ValidationError("AUC needs both classes");
  const double np = static_cast<double>(positives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return 100.0 * u / (np * static_cast<double>(negatives));
}

Cosine cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("cosine of vectors with different dimensions");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return {0.0, true};
  const double value = dot / (std::sqrt(na) * std::sqrt(nb));
  return {std::clamp(value, -1.0, 1.0), false};
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) share rank mean((i+1)..j).
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

bool is_constant(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("spearman inputs differ in length");
  if (x.size() < 2) throw ValidationError("spearman needs at least two observations");
  if (is_constant(x) || is_constant(y)) throw ValidationError("spearman is undefined for a constant input");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;  // same for any average-ranked vector
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

const RankedEntry* RankedTable::find(const std::string& model, const std::string& metric) const {
  for (const auto& row : rows) {
    if (row.model == model && row.metric == metric) return &row;
  }
  return nullptr;
}

RankedTable rank_models(const ScoreTable& scores) {
  if (scores.empty()) throw ValidationError("no models to rank");
  std::set<std::string> metrics;
  for (const auto& [metric, value] : scores.begin()->second) metrics.insert(metric);
  for (const auto& [model, row] : scores) {
    std::set<std::string> own;
    for (const auto& [metric, value] : row) own.insert(metric);
    if (own != metrics) throw ValidationError("model '" + model + "' reports a different metric set");
  }

  RankedTable table;
  for (const auto& metric : metrics) {
    std::vector<RankedEntry> column;
    for (const auto& [model, row] : scores) column.push_back({model, metric, row.at(metric), 0});
    for (auto& entry : column) {
      std::size_t better = 0;
      for (const auto& other : column) better += other.value > entry.value ? 1 : 0;
      entry.rank = better + 1;
    }
    std::stable_sort(column.begin(), column.end(),
                     [](const RankedEntry& a, const RankedEntry& b) { return a.rank < b.rank; });
    table.rows.insert(table.rows.end(), column.begin(), column.end());
  }
  return table;
}

}  // namespace graphprobe
