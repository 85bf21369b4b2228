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

#include <gtest/gtest.h>

#include "mahood/dataset.hpp"
#include "mahood/synthetic.hpp"
#include "test_util.hpp"

namespace mahood {
namespace {

using testing::TempDir;

SyntheticSpec small_spec() {
  SyntheticSpec s;
  s.ambient_shape = Shape4{{4, 2, 2, 2}};
  s.n_train = 20;
  s.n_id_test = 5;
  s.n_ood_test = 6;
  s.latent_dim = 3;
  return s;
}

TEST(SyntheticTest, ShapesIdsAndLabels) {
  const auto ds = generate(small_spec());
  EXPECT_EQ(ds.train.size(), 20u);
  EXPECT_EQ(ds.id_test.size(), 5u);
  EXPECT_EQ(ds.ood_test.size(), 6u);
  EXPECT_EQ(ds.train.front().shape(), (Shape4{{4, 2, 2, 2}}));
  EXPECT_EQ(ds.train_ids[3], "train_00003");
  EXPECT_EQ(ds.ood_ids[0], "ood_00000");
  EXPECT_EQ(ds.labels.rows.size(), 11u);
  const auto labels = ds.labels.label_map();
  EXPECT_EQ(labels.at("id_00004"), Label::kId);
  EXPECT_EQ(labels.at("ood_00005"), Label::kOod);
}

TEST(SyntheticTest, EmbeddingIsOrthonormalAndDirectionUnit) {
  const auto ds = generate(small_spec());
  const Eigen::MatrixXd gram = ds.embedding.transpose() * ds.embedding;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-12);
  EXPECT_NEAR(ds.ood_direction.norm(), 1.0, 1e-14);
}

TEST(SyntheticTest, DeterministicInSeed) {
  const auto a = generate(small_spec());
  const auto b = generate(small_spec());
  auto spec = small_spec();
  spec.seed = 1;
  const auto c = generate(spec);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    ASSERT_EQ(std::memcmp(a.train[i].values().data(), b.train[i].values().data(),
                          a.train[i].size() * sizeof(double)),
              0);
  }
  EXPECT_NE(a.train[0].values()[0], c.train[0].values()[0]);
}

TEST(SyntheticTest, OodMeanShiftMatchesSpec) {
  SyntheticSpec spec;
  spec.ambient_shape = Shape4{{2, 2, 2, 2}};
  spec.n_train = 10;
  spec.n_id_test = 4000;
  spec.n_ood_test = 4000;
  spec.shift = 2.0;
  spec.noise_sigma = 0.0;
  spec.latent_dim = 4;
  const auto ds = generate(spec);
  const Vector dir = ds.embedding * ds.ood_direction;
  double id = 0, ood = 0;
  for (const auto& t : ds.id_test) id += flatten(t).dot(dir);
  for (const auto& t : ds.ood_test) ood += flatten(t).dot(dir);
  EXPECT_NEAR(id / 4000, 0.0, 0.06);
  EXPECT_NEAR(ood / 4000, 2.0, 0.06);
}

TEST(SyntheticTest, WrittenDatasetLoadsBack) {
  TempDir dir;
  const auto ds = generate(small_spec());
  write_dataset(ds, dir.path());
  const auto m = load_manifest(dir / "manifest.csv");
  EXPECT_EQ(m.entries.size(), 31u);
  EXPECT_EQ(m.select(Split::kTrain).size(), 20u);
  EXPECT_EQ(m.select(Split::kTest).size(), 11u);
  EXPECT_EQ(m.shape, (Shape4{{4, 2, 2, 2}}));
  const auto labels = load_labels(dir / "labels.csv");
  EXPECT_EQ(labels.rows.size(), 11u);
  const auto back = read_array(dir / "npy" / "train_00000.npy");
  EXPECT_EQ(std::memcmp(back.values().data(), ds.train[0].values().data(), back.size() * 8), 0);
}

TEST(SyntheticTest, OracleAurocValues) {
  EXPECT_DOUBLE_EQ(oracle_auroc_one_dim(0.0), 0.5);
  EXPECT_NEAR(oracle_auroc_one_dim(1.0), 0.760249, 1e-6);
  EXPECT_NEAR(oracle_auroc_one_dim(2.0), 0.921350, 1e-6);
  EXPECT_THROW(oracle_auroc_one_dim(-1.0), ConfigError);
}

TEST(SyntheticTest, RejectsBadSpecs) {
  auto s = small_spec();
  s.latent_dim = 100;
  EXPECT_THROW(generate(s), ConfigError);
  s = small_spec();
  s.n_train = 0;
  EXPECT_THROW(generate(s), ConfigError);
  s = small_spec();
  s.shift = -1;
  EXPECT_THROW(generate(s), ConfigError);
}

}  // namespace
}  // namespace mahood
