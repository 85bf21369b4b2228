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

#include <random>

#include <gtest/gtest.h>

#include "mahood/pooling.hpp"
#include "mahood/reducer.hpp"

namespace mahood {
namespace {

EmbeddingTensor random_tensor(std::mt19937_64& rng, Shape4 s) {
  std::normal_distribution<double> n;
  EmbeddingTensor t(s);
  for (auto& v : t.values()) v = n(rng);
  return t;
}

TEST(PoolingTest, HandMeanOfFourCells) {
  const EmbeddingTensor t(Shape4{{1, 1, 2, 2}}, std::vector<double>{1, 2, 3, 4});
  const auto out = average_pool(t, {2, 2, 2});
  EXPECT_EQ(out.shape(), (Shape4{{1, 1, 1, 1}}));
  EXPECT_DOUBLE_EQ(out.values()[0], 2.5);
}

TEST(PoolingTest, ConstantStaysConstant) {
  for (int dims : {2, 3}) {
    for (auto [j, k] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}}) {
      const EmbeddingTensor t(Shape4{{3, 5, 4, 6}}, 0.1);
      const auto out = average_pool(t, {dims, static_cast<std::size_t>(j), static_cast<std::size_t>(k)});
      for (double v : out.values()) EXPECT_NEAR(v, 0.1, 1e-15);
    }
  }
}

TEST(PoolingTest, CanonicalShapes) {
  const Shape4 in{{768, 8, 4, 4}};
  EXPECT_EQ(pooled_shape(in, {3, 3, 2}), (Shape4{{768, 3, 1, 1}}));
  EXPECT_EQ(pooled_shape(in, {3, 3, 2}).size(), 2304u);
  EXPECT_EQ(pooled_shape(in, {3, 4, 1}), (Shape4{{768, 5, 1, 1}}));
  EXPECT_EQ(pooled_shape(in, {2, 2, 1}), (Shape4{{768, 8, 3, 3}}));
  EXPECT_EQ(pooled_shape(in, {2, 3, 2}), (Shape4{{768, 8, 1, 1}}));
}

TEST(PoolingTest, TwoDimensionalPoolingLeavesDepthAlone) {
  std::mt19937_64 rng(1);
  const auto t = random_tensor(rng, Shape4{{2, 3, 4, 4}});
  const auto out = average_pool(t, {2, 2, 2});
  ASSERT_EQ(out.shape(), (Shape4{{2, 3, 2, 2}}));
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t d = 0; d < 3; ++d) {
      const double expect = (t(c, d, 2, 0) + t(c, d, 2, 1) + t(c, d, 3, 0) + t(c, d, 3, 1)) / 4.0;
      EXPECT_NEAR(out(c, d, 1, 0), expect, 1e-15);
    }
}

TEST(PoolingTest, ThreeDimensionalWindow) {
  std::mt19937_64 rng(2);
  const auto t = random_tensor(rng, Shape4{{2, 4, 4, 4}});
  const auto out = average_pool(t, {3, 2, 2});
  ASSERT_EQ(out.shape(), (Shape4{{2, 2, 2, 2}}));
  double sum = 0.0;
  for (std::size_t d = 2; d < 4; ++d)
    for (std::size_t h = 0; h < 2; ++h)
      for (std::size_t w = 2; w < 4; ++w) sum += t(1, d, h, w);
  EXPECT_NEAR(out(1, 1, 0, 1), sum / 8.0, 1e-15);
}

TEST(PoolingTest, KernelLongerThanAxisIsNamed) {
  const EmbeddingTensor t(Shape4{{1, 2, 4, 4}});
  try {
    average_pool(t, {3, 3, 1});
    FAIL();
  } catch (const SizeError& e) {
    EXPECT_NE(std::string(e.what()).find("axis D"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(average_pool(t, {2, 3, 1}));
  EXPECT_THROW(average_pool(t, {4, 2, 1}), ConfigError);
}

TEST(PoolingTest, LinearityAndMeanPreservation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = random_tensor(rng, Shape4{{3, 6, 6, 6}});
    const double a = u(rng);
    EmbeddingTensor scaled = t;
    for (auto& v : scaled.values()) v *= a;
    const PoolingSpec spec{trial % 2 ? 2 : 3, static_cast<std::size_t>(1 + trial % 3),
                           static_cast<std::size_t>(1 + trial % 2)};
    const auto p = average_pool(t, spec);
    const auto ps = average_pool(scaled, spec);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(ps.values()[i], a * p.values()[i], 1e-12);

    // k = j and j | 6: output grand mean equals input grand mean.
    const std::size_t j = trial % 2 ? 2 : 3;
    const auto q = average_pool(t, {spec.dims, j, j});
    double in_mean = 0.0, out_mean = 0.0;
    for (double v : t.values()) in_mean += v / static_cast<double>(t.size());
    for (double v : q.values()) out_mean += v / static_cast<double>(q.size());
    EXPECT_NEAR(in_mean, out_mean, 1e-12);
  }
}

TEST(FlattenTest, RowMajorOrder) {
  const EmbeddingTensor t(Shape4{{1, 1, 2, 2}}, std::vector<double>{1, 2, 3, 4});
  const Vector v = flatten(t);
  ASSERT_EQ(v.size(), 4);
  EXPECT_EQ(v[0], 1);
  EXPECT_EQ(v[1], 2);
  EXPECT_EQ(v[2], 3);
  EXPECT_EQ(v[3], 4);
  EXPECT_EQ(flatten(EmbeddingTensor(Shape4{{1, 1, 1, 1}}, 7.0))[0], 7.0);
  EXPECT_EQ(flatten(EmbeddingTensor(Shape4{{768, 8, 4, 4}})).size(), 98304);
}

TEST(ReducerTest, ParseRoundTrip) {
  for (const std::string s : {"identity", "pool2d:2,1", "pool3d:4,1", "pca:16", "tsne:2"}) {
    EXPECT_EQ(reducer_token(parse_reducer(s)), s);
  }
  EXPECT_EQ(reducer_label(parse_reducer("pool3d:3,2")), "AveragePool3D(3, 2)");
  EXPECT_EQ(reducer_label(parse_reducer("pca:2")), "PCA(2)");
  EXPECT_EQ(reducer_label(parse_reducer("identity")), "Baseline");
  EXPECT_EQ(reducer_label(parse_reducer("tsne")), "t-SNE");
  EXPECT_THROW(parse_reducer("pool3d:3"), ConfigError);
  EXPECT_THROW(parse_reducer("pca:x"), ConfigError);
  EXPECT_THROW(parse_reducer("umap:2"), ConfigError);
}

TEST(ReducerTest, ReduceDatasetShapes) {
  std::mt19937_64 rng(9);
  const Shape4 s{{16, 8, 4, 4}};
  std::vector<EmbeddingTensor> train, test;
  for (int i = 0; i < 20; ++i) train.push_back(random_tensor(rng, s));
  for (int i = 0; i < 5; ++i) test.push_back(random_tensor(rng, s));
  auto r = reduce_dataset(train, test, IdentityReducer{});
  EXPECT_EQ(r.train.cols(), 2048);
  EXPECT_EQ(r.test.rows(), 5);
  r = reduce_dataset(train, test, PoolingSpec{3, 3, 2});
  EXPECT_EQ(r.train.cols(), 16 * 3);
  r = reduce_dataset(train, test, PcaReducer{2});
  EXPECT_EQ(r.train.cols(), 2);
  EXPECT_EQ(r.test.cols(), 2);
  ASSERT_TRUE(r.reducer.pca.has_value());
  // Pooling is stateless and applied identically to both splits.
  r = reduce_dataset(train, test, PoolingSpec{2, 2, 2});
  const auto again = apply_reducer(r.reducer, test);
  EXPECT_EQ(again, r.test);
}

TEST(ReducerTest, TsneEmbedsJointly) {
  std::mt19937_64 rng(11);
  const Shape4 s{{2, 2, 2, 2}};
  std::vector<EmbeddingTensor> train, test;
  for (int i = 0; i < 30; ++i) train.push_back(random_tensor(rng, s));
  for (int i = 0; i < 10; ++i) test.push_back(random_tensor(rng, s));
  TsneConfig cfg;
  cfg.perplexity = 5;
  cfg.n_iter = 300;
  const auto r = reduce_dataset(train, test, cfg);
  EXPECT_EQ(r.train.rows(), 30);
  EXPECT_EQ(r.test.rows(), 10);
  EXPECT_EQ(r.train.cols(), 2);
  ASSERT_TRUE(r.reducer.tsne.has_value());
  EXPECT_EQ(r.reducer.tsne->embedding.bottomRows(10), r.test);
  EXPECT_THROW(apply_reducer(r.reducer, test), ConfigError);
}

TEST(ReducerTest, RejectsMixedShapes) {
  std::vector<EmbeddingTensor> train{EmbeddingTensor(Shape4{{1, 1, 2, 2}}),
                                     EmbeddingTensor(Shape4{{1, 1, 2, 2}})};
  std::vector<EmbeddingTensor> test{EmbeddingTensor(Shape4{{1, 1, 2, 1}})};
  EXPECT_THROW(reduce_dataset(train, test, IdentityReducer{}), SizeError);
}

}  // namespace
}  // namespace mahood
