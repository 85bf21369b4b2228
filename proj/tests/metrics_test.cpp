/*
 * Copyright 2026 The mahood Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mahood/metrics.hpp"
#include "test_util.hpp"

namespace mahood {
namespace {

using testing::brute_force_auroc;
using testing::samples;

std::vector<ScoredSample> random_samples(std::mt19937_64& rng, int n, double shift, bool ties) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution coin(0.4);
  std::vector<ScoredSample> s;
  for (int i = 0; i < n; ++i) {
    const bool ood = coin(rng);
    double v = noise(rng) + (ood ? shift : 0.0);
    if (ties) v = std::round(v * 2.0) / 2.0;
    s.push_back({std::to_string(i), v, ood ? Label::kOod : Label::kId});
  }
  // Both classes present.
  s.push_back({"po", 0.0, Label::kOod});
  s.push_back({"pi", 0.0, Label::kId});
  return s;
}

/// Average precision from the textbook definition: mean over positives of the
/// precision at that positive's threshold (ties grouped).
double brute_force_ap(const std::vector<ScoredSample>& s) {
  double sum = 0.0;
  int positives = 0;
  for (const auto& a : s) {
    if (a.label != Label::kOod) continue;
    ++positives;
    int tp = 0, all = 0;
    for (const auto& b : s) {
      if (b.score >= a.score) {
        ++all;
        if (b.label == Label::kOod) ++tp;
      }
    }
    sum += static_cast<double>(tp) / all;
  }
  return sum / positives;
}

/// Exhaustive minimum FPR over all thresholds "score >= t".
double brute_force_fpr(const std::vector<ScoredSample>& s, double target) {
  double best = 1.0;
  double p = 0, n = 0;
  for (const auto& a : s) (a.label == Label::kOod ? p : n) += 1;
  for (const auto& t : s) {
    double tp = 0, fp = 0;
    for (const auto& b : s) {
      if (b.score >= t.score) (b.label == Label::kOod ? tp : fp) += 1;
    }
    if (tp / p >= target - 1e-12) best = std::min(best, fp / n);
  }
  return best;
}

TEST(MetricsTest, HandFixtures) {
  const auto perfect = samples({0.9, 0.8}, {0.2, 0.1});
  EXPECT_EQ(auroc(perfect), 1.0);
  EXPECT_EQ(aupr(perfect), 1.0);
  EXPECT_EQ(fpr_at_tpr(perfect), 0.0);
  EXPECT_EQ(auroc(samples({0.5, 0.5}, {0.5, 0.5})), 0.5);
  EXPECT_EQ(auroc(samples({0.3}, {0.3})), 1.0 * 0.5);
  // Ranked O, I, O: AP = (1 + 2/3) / 2 = 5/6.
  EXPECT_NEAR(aupr(samples({0.9, 0.5}, {0.7})), 5.0 / 6.0, 1e-15);
  // OOD {0.9, 0.6, 0.4, 0.2}, ID {0.8, 0.5, 0.1}: TPR 0.75 reached at 0.4 with FPR 2/3.
  EXPECT_NEAR(fpr_at_tpr(samples({0.9, 0.6, 0.4, 0.2}, {0.8, 0.5, 0.1})), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(fpr_at_tpr(samples({0.9, 0.6, 0.4, 0.2}, {0.8, 0.3, 0.1})), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(auroc(samples({0.1, 0.2}, {0.8, 0.9})), 0.0);
}

TEST(MetricsTest, AgreesWithBruteForceOracles) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_samples(rng, 5 + trial % 60, 1.0, trial % 2 == 0);
    EXPECT_NEAR(auroc(s), brute_force_auroc(s), 1e-12);
    EXPECT_NEAR(aupr(s), brute_force_ap(s), 1e-12);
    for (double target : {0.5, 0.75, 0.95, 1.0}) {
      EXPECT_NEAR(fpr_at_tpr(s, target), brute_force_fpr(s, target), 1e-12);
    }
  }
}

TEST(MetricsTest, RangeAndMonotoneInvariance) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_samples(rng, 40, 0.7, trial % 3 == 0);
    const auto m = evaluate(s);
    for (double v : {m.auroc, m.aupr, m.fpr_at_tpr}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    auto t = s;
    for (auto& x : t) x.score = std::exp(3.0 * x.score) + 7.0;
    const auto mt = evaluate(t);
    EXPECT_EQ(m.auroc, mt.auroc);
    EXPECT_EQ(m.aupr, mt.aupr);
    EXPECT_EQ(m.fpr_at_tpr, mt.fpr_at_tpr);
  }
}

TEST(MetricsTest, LabelFlipAndPermutation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_samples(rng, 50, 0.5, trial % 2 == 1);
    const double a = auroc(s);
    auto flipped = s;
    for (auto& x : flipped) x.label = x.label == Label::kOod ? Label::kId : Label::kOod;
    EXPECT_NEAR(auroc(flipped), 1.0 - a, 1e-12);
    auto negated = s;
    for (auto& x : negated) x.score = -x.score;
    EXPECT_NEAR(auroc(negated), 1.0 - a, 1e-12);
    auto shuffled = s;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto m0 = evaluate(s);
    const auto m1 = evaluate(shuffled);
    EXPECT_EQ(m0.auroc, m1.auroc);
    EXPECT_EQ(m0.aupr, m1.aupr);
    EXPECT_EQ(m0.fpr_at_tpr, m1.fpr_at_tpr);
  }
}

TEST(MetricsTest, FprIsMonotoneInTarget) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_samples(rng, 60, 1.0, false);
    double prev = 0.0;
    for (double t = 0.05; t <= 1.0; t += 0.05) {
      const double f = fpr_at_tpr(s, t);
      EXPECT_GE(f, prev);
      prev = f;
    }
  }
}

TEST(MetricsTest, DegenerateInputs) {
  const auto only_ood = samples({0.1, 0.2}, {});
  const auto only_id = samples({}, {0.1, 0.2});
  EXPECT_THROW(auroc(only_ood), DegenerateInputError);
  EXPECT_THROW(auroc(only_id), DegenerateInputError);
  EXPECT_THROW(fpr_at_tpr(only_ood), DegenerateInputError);
  EXPECT_THROW(aupr(only_id), DegenerateInputError);
  EXPECT_EQ(aupr(only_ood), 1.0);
  auto bad = samples({std::nan("")}, {0.1});
  EXPECT_THROW(auroc(bad), DataError);
  EXPECT_THROW(fpr_at_tpr(samples({1.0}, {0.0}), 0.0), ConfigError);
  EXPECT_THROW(fpr_at_tpr(samples({1.0}, {0.0}), 1.5), ConfigError);
}

TEST(MetricsTest, NullScoresCenterOnHalf) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  double sum = 0.0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    std::vector<ScoredSample> s;
    for (int i = 0; i < 100; ++i) s.push_back({"", n(rng), i < 50 ? Label::kOod : Label::kId});
    sum += auroc(s);
  }
  // Null AUROC for 50 vs 50 has sd ~0.058; the mean of 400 has sd ~0.003.
  EXPECT_NEAR(sum / reps, 0.5, 0.012);
}

TEST(AggregateTest, MeanAndPopulationSd) {
  const std::vector<MetricsTriple> one{{0.8, 0.7, 0.3, 0.75}};
  const auto s1 = aggregate_trials(one);
  EXPECT_EQ(s1.mean.auroc, 0.8);
  EXPECT_EQ(s1.sd.auroc, 0.0);
  EXPECT_EQ(s1.n_trials, 1);
  const std::vector<MetricsTriple> two{{0.6, 0.5, 0.2, 0.75}, {0.8, 0.7, 0.4, 0.75}};
  const auto s2 = aggregate_trials(two);
  EXPECT_NEAR(s2.mean.auroc, 0.7, 1e-15);
  EXPECT_NEAR(s2.sd.auroc, 0.1, 1e-15);
  EXPECT_NEAR(s2.sd.fpr_at_tpr, 0.1, 1e-15);
  const std::vector<MetricsTriple> mixed{{0.6, 0.5, 0.2, 0.75}, {0.8, 0.7, 0.4, 0.9}};
  EXPECT_THROW(aggregate_trials(mixed), DataError);
  EXPECT_THROW(aggregate_trials(std::vector<MetricsTriple>{}), DegenerateInputError);
}

TEST(MakeSamplesTest, PairsByPosition) {
  const std::vector<double> scores{1.0, 2.0};
  const std::vector<Label> labels{Label::kId, Label::kOod};
  const auto s = make_samples(scores, labels);
  EXPECT_EQ(s[1].label, Label::kOod);
  EXPECT_EQ(auroc(s), 1.0);
  EXPECT_THROW(make_samples(scores, std::vector<Label>{Label::kId}), DimensionError);
}

}  // namespace
}  // namespace mahood
