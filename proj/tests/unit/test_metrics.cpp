#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "graphprobe/error.hpp"
#include "graphprobe/metrics.hpp"
#include "graphprobe/random.hpp"

using namespace graphprobe;

using Bits = std::vector<std::uint8_t>;
using Reals = std::vector<double>;

TEST(Accuracy, Examples) {
  EXPECT_DOUBLE_EQ(accuracy(Bits{1, 0, 1}, Bits{1, 0, 1}), 100.0);
  EXPECT_DOUBLE_EQ(accuracy(Bits{1, 1, 1, 1, 0, 0, 0, 0}, Bits{1, 1, 0, 0, 1, 1, 0, 0}), 50.0);
  EXPECT_NEAR(accuracy(Bits{1, 1, 0}, Bits{1, 0, 0}), 66.667, 1e-3);
  EXPECT_THROW(accuracy(Bits{1}, Bits{1, 0}), ValidationError);
  EXPECT_THROW(accuracy(Bits{}, Bits{}), ValidationError);
}

TEST(F1, Examples) {
  EXPECT_DOUBLE_EQ(f1(Bits{1, 0, 1, 0}, Bits{1, 0, 1, 0}), 100.0);
  EXPECT_NEAR(f1(Bits{1, 1, 1, 1, 1, 1, 1, 1}, Bits{1, 1, 1, 1, 0, 0, 0, 0}), 100.0 / 3.0, 1e-9);
  EXPECT_DOUBLE_EQ(f1(Bits{0, 1, 0, 1}, Bits{1, 0, 1, 0}), 0.0);
  // Class 0 is absent from both sides and drops out of the average.
  EXPECT_DOUBLE_EQ(f1(Bits{1, 1}, Bits{1, 1}), 100.0);
  EXPECT_THROW(f1(Bits{1}, Bits{}), ValidationError);
}

TEST(F1, MatchesAccuracyOnSymmetricErrors) {
  // Balanced labels, one error in each class.
  const Bits labels{1, 1, 1, 1, 0, 0, 0, 0};
  const Bits preds{1, 1, 1, 0, 0, 0, 0, 1};
  EXPECT_DOUBLE_EQ(f1(preds, labels), accuracy(preds, labels));
}

TEST(Auc, Examples) {
  EXPECT_DOUBLE_EQ(auc(Reals{0.1, 0.2, 0.8, 0.9}, Bits{0, 0, 1, 1}), 100.0);
  EXPECT_DOUBLE_EQ(auc(Reals{0.5, 0.5, 0.5, 0.5}, Bits{0, 1, 0, 1}), 50.0);
  EXPECT_DOUBLE_EQ(auc(Reals{0.1, 0.4, 0.35, 0.8}, Bits{0, 0, 1, 1}), 75.0);
  EXPECT_THROW(auc(Reals{0.1, 0.2}, Bits{1, 1}), ValidationError);
}

TEST(Auc, InvariantUnderIncreasingTransforms) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    Reals s(30);
    Bits y(30);
    for (std::size_t k = 0; k < s.size(); ++k) {
      s[k] = std::round(rng.normal() * 4.0) / 4.0;  // coarse grid so ties occur
      y[k] = static_cast<std::uint8_t>(k % 2);
    }
    Reals t(s.size());
    std::transform(s.begin(), s.end(), t.begin(), [](double v) { return std::exp(3.0 * v) - 7.0; });
    EXPECT_DOUBLE_EQ(auc(s, y), auc(t, y));
  }
}

TEST(Cosine, Examples) {
  EXPECT_NEAR(cosine_similarity(Reals{1, 2, 3}, Reals{1, 2, 3}).value, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(cosine_similarity(Reals{1, 0}, Reals{0, 1}).value, 0.0);
  EXPECT_NEAR(cosine_similarity(Reals{1, -2}, Reals{-1, 2}).value, -1.0, 1e-15);
  const auto z = cosine_similarity(Reals{0, 0}, Reals{1, 2});
  EXPECT_TRUE(z.degenerate);
  EXPECT_EQ(z.value, 0.0);
  EXPECT_THROW(cosine_similarity(Reals{1}, Reals{1, 2}), ValidationError);
}

TEST(Spearman, Examples) {
  const Reals x{1, 2, 3, 4, 5};
  EXPECT_NEAR(spearman(x, x), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, Reals{5, 4, 3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(spearman(x, Reals{1, 3, 2, 5, 4}), 0.8, 1e-12);
  EXPECT_THROW(spearman(x, Reals{2, 2, 2, 2, 2}), ValidationError);
  EXPECT_THROW(spearman(Reals{1}, Reals{1}), ValidationError);
  EXPECT_THROW(spearman(x, Reals{1, 2}), ValidationError);
}

TEST(Spearman, AverageRanks) {
  EXPECT_EQ(average_ranks(Reals{10, 20, 20, 5}), (Reals{2, 3.5, 3.5, 1}));
}

TEST(Spearman, TieFreeClosedForm) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.below(20);
    Reals x(n);
    Reals y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = rng.normal();
      y[k] = rng.normal();
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    double d2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) d2 += (rx[k] - ry[k]) * (rx[k] - ry[k]);
    const double nn = static_cast<double>(n);
    EXPECT_NEAR(spearman(x, y), 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0)), 1e-12);
  }
}

TEST(Spearman, AffineMaps) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Reals x(12);
    for (double& v : x) v = std::round(rng.normal() * 3.0);
    if (is_constant(x)) continue;
    const double a = rng.uniform(0.1, 5.0);
    const double b = rng.normal();
    Reals up(x.size());
    Reals down(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      up[k] = a * x[k] + b;
      down[k] = -a * x[k] + b;
    }
    EXPECT_NEAR(spearman(x, up), 1.0, 1e-12);
    EXPECT_NEAR(spearman(x, down), -1.0, 1e-12);
  }
}

TEST(RankModels, PublishedCoraRow) {
  const ScoreTable scores{{"GCN", {{"ACC", 78.6}}}, {"GAT", {{"ACC", 79.9}}}, {"VGAE", {{"ACC", 79.7}}}};
  const auto table = rank_models(scores);
  EXPECT_EQ(table.find("GAT", "ACC")->rank, 1u);
  EXPECT_EQ(table.find("VGAE", "ACC")->rank, 2u);
  EXPECT_EQ(table.find("GCN", "ACC")->rank, 3u);
  EXPECT_EQ(table.find("MLP", "ACC"), nullptr);
}

TEST(RankModels, CompetitionTies) {
  const ScoreTable scores{{"a", {{"m", 5.0}}}, {"b", {{"m", 5.0}}}, {"c", {{"m", 1.0}}}};
  const auto table = rank_models(scores);
  EXPECT_EQ(table.find("a", "m")->rank, 1u);
  EXPECT_EQ(table.find("b", "m")->rank, 1u);
  EXPECT_EQ(table.find("c", "m")->rank, 3u);
  EXPECT_EQ(rank_models(ScoreTable{{"solo", {{"m", 0.1}}}}).rows.at(0).rank, 1u);
}

TEST(RankModels, Errors) {
  EXPECT_THROW(rank_models(ScoreTable{}), ValidationError);
  EXPECT_THROW(rank_models(ScoreTable{{"a", {{"x", 1.0}}}, {"b", {{"y", 1.0}}}}), ValidationError);
}

TEST(RankModels, IndependentOfInsertionOrder) {
  Rng rng(4);
  std::vector<std::pair<std::string, double>> entries;
  for (int k = 0; k < 8; ++k) entries.emplace_back("m" + std::to_string(k), std::round(rng.normal() * 2.0));
  ScoreTable first;
  for (const auto& [m, v] : entries) first[m]["acc"] = v;
  std::vector<std::size_t> ranks;
  for (const auto& row : rank_models(first).rows) ranks.push_back(row.rank);
  for (int trial = 0; trial < 10; ++trial) {
    rng.shuffle(std::span<std::pair<std::string, double>>(entries));
    ScoreTable t;
    for (const auto& [m, v] : entries) t[m]["acc"] = v;
    const auto table = rank_models(t);
    for (const auto& [m, v] : entries) EXPECT_EQ(table.find(m, "acc")->rank, rank_models(first).find(m, "acc")->rank);
  }
  // Competition ranks: each value's rank is one plus the count of strictly larger values.
  for (const auto& [m, v] : entries) {
    std::size_t larger = 0;
    for (const auto& [m2, v2] : entries) larger += v2 > v;
    EXPECT_EQ(rank_models(first).find(m, "acc")->rank, larger + 1);
  }
}
