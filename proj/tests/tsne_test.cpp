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

#include <cmath>
#include <cstring>
#include <random>

#include <gtest/gtest.h>

#include "mahood/tsne.hpp"
#include "test_util.hpp"

namespace mahood {
namespace {

using testing::random_matrix;

TsneConfig short_config(std::uint64_t seed) {
  TsneConfig c;
  c.perplexity = 10.0;
  c.n_iter = 400;
  c.exaggeration_iters = 100;
  c.seed = seed;
  return c;
}

/// Two tight clusters far apart: 50 points near 0 and 50 near 100 * e_0.
FeatureMatrix two_clusters(std::mt19937_64& rng, Eigen::Index d) {
  FeatureMatrix x = random_matrix(rng, 100, d);
  x.bottomRows(50).col(0).array() += 100.0;
  return x;
}

TEST(TsneTest, OutputShapeAndDeterminism) {
  std::mt19937_64 rng(1);
  const FeatureMatrix x = random_matrix(rng, 100, 10);
  const auto a = tsne_embed(x, short_config(3));
  const auto b = tsne_embed(x, short_config(3));
  EXPECT_EQ(a.embedding.rows(), 100);
  EXPECT_EQ(a.embedding.cols(), 2);
  EXPECT_TRUE(a.embedding.allFinite());
  ASSERT_EQ(std::memcmp(a.embedding.data(), b.embedding.data(), sizeof(double) * 200), 0);
  const auto c = tsne_embed(x, short_config(4));
  EXPECT_NE(a.embedding, c.embedding);
}

TEST(TsneTest, SeparatesClusters) {
  std::mt19937_64 rng(2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FeatureMatrix x = two_clusters(rng, 5);
    const auto r = tsne_embed(x, short_config(seed));
    const Eigen::RowVectorXd c0 = r.embedding.topRows(50).colwise().mean();
    const Eigen::RowVectorXd c1 = r.embedding.bottomRows(50).colwise().mean();
    int agree = 0;
    for (Eigen::Index i = 0; i < 100; ++i) {
      const bool nearer0 = (r.embedding.row(i) - c0).norm() < (r.embedding.row(i) - c1).norm();
      if (nearer0 == (i < 50)) ++agree;
    }
    EXPECT_GE(agree, 95) << "seed " << seed;
  }
}

TEST(TsneTest, KlDoesNotIncreaseAfterExaggeration) {
  std::mt19937_64 rng(3);
  const auto r = tsne_embed(two_clusters(rng, 4), short_config(1));
  EXPECT_GT(r.kl_after_exaggeration, 0.0);
  EXPECT_LE(r.kl_final, r.kl_after_exaggeration + 1e-9);
}

TEST(TsneTest, ConditionalAffinitiesHitPerplexity) {
  std::mt19937_64 rng(4);
  const FeatureMatrix x = random_matrix(rng, 60, 3);
  const auto p = tsne_detail::conditional_affinities(tsne_detail::squared_distances(x), 15.0);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
    EXPECT_EQ(p(i, i), 0.0);
    double h = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0.0) h -= p(i, j) * std::log(p(i, j));
    }
    EXPECT_NEAR(std::exp(h), 15.0, 15.0 * 1e-4);
  }
}

TEST(TsneTest, JointAffinitiesAreSymmetricDistribution) {
  std::mt19937_64 rng(6);
  const FeatureMatrix x = random_matrix(rng, 40, 4);
  const auto p = tsne_detail::joint_affinities(x, 8.0);
  const auto cond = tsne_detail::conditional_affinities(tsne_detail::squared_distances(x), 8.0);
  EXPECT_NEAR(p.sum(), 1.0, 1e-9);
  for (Eigen::Index i = 0; i < 40; ++i) {
    for (Eigen::Index j = 0; j < 40; ++j) {
      if (i == j) continue;
      EXPECT_EQ(p(i, j), p(j, i));
      EXPECT_NEAR(p(i, j), std::max((cond(i, j) + cond(j, i)) / 80.0, 1e-12), 1e-15);
    }
  }
}

TEST(TsneTest, RejectsInfeasibleSettings) {
  std::mt19937_64 rng(5);
  const FeatureMatrix x = random_matrix(rng, 30, 3);
  TsneConfig c;  // perplexity 30 needs N > 91
  EXPECT_THROW(tsne_embed(x, c), ConfigError);
  c.perplexity = 5.0;
  c.n_iter = 50;
  EXPECT_NO_THROW(tsne_embed(x, c));
  EXPECT_THROW(tsne_embed(random_matrix(rng, 3, 3), c), ConfigError);
  c.learning_rate = 0.0;
  EXPECT_THROW(tsne_embed(x, c), ConfigError);
}

}  // namespace
}  // namespace mahood
