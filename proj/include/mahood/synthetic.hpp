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

#pragma once

// Synthetic embedding datasets with a known ID/OOD structure: Gaussian
// latents pushed into the ambient tensor space through a random linear map
// with orthonormal columns, plus isotropic ambient noise.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mahood/dataset.hpp"
#include "mahood/errors.hpp"
#include "mahood/npy.hpp"
#include "mahood/rng.hpp"
#include "mahood/tensor.hpp"

namespace mahood {

struct SyntheticSpec {
  int latent_dim = 8;
  Shape4 ambient_shape{{16, 8, 4, 4}};
  int n_train = 300;
  int n_id_test = 100;
  int n_ood_test = 100;
  double shift = 3.0;        // OOD mean offset along a random unit latent direction
  double noise_sigma = 0.1;  // isotropic ambient noise
  std::uint64_t seed = 0;

  void validate() const {
    for (auto d : ambient_shape.dims) {
      if (d == 0) throw ConfigError("ambient shape extents must be positive");
    }
    if (latent_dim < 1 || static_cast<std::size_t>(latent_dim) > ambient_shape.size()) {
      throw ConfigError("latent_dim must lie in [1, " + std::to_string(ambient_shape.size()) +
                        "], got " + std::to_string(latent_dim));
    }
    if (n_train < 1 || n_id_test < 1 || n_ood_test < 1) {
      throw ConfigError("sample counts must be positive");
    }
    if (!(shift >= 0.0) || !std::isfinite(shift)) throw ConfigError("shift must be >= 0");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
      throw ConfigError("noise_sigma must be >= 0");
    }
  }
};

struct SyntheticDataset {
  std::vector<EmbeddingTensor> train;
  std::vector<EmbeddingTensor> id_test;
  std::vector<EmbeddingTensor> ood_test;
  std::vector<std::string> train_ids, id_ids, ood_ids;
  LabelTable labels;          // test samples only
  Eigen::MatrixXd embedding;  // ambient x latent, orthonormal columns
  Vector ood_direction;       // unit latent vector
};

namespace synthetic_detail {

enum Stream : std::uint64_t { kEmbed = 1, kDirection, kTrain, kIdTest, kOodTest, kNoise };

inline std::string sample_id(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05d", prefix, i);
  return buf;
}

}  // namespace synthetic_detail

/// Deterministic in `spec.seed`.
inline SyntheticDataset generate(const SyntheticSpec& spec) {
  using namespace synthetic_detail;
  spec.validate();
  const Philox root(spec.seed);
  const auto ambient = static_cast<Eigen::Index>(spec.ambient_shape.size());
  const Eigen::Index latent = spec.latent_dim;

  SyntheticDataset ds;
  {
    Philox rng = root.split(kEmbed);
    Eigen::MatrixXd g(ambient, latent);
    for (Eigen::Index i = 0; i < ambient; ++i) {
      for (Eigen::Index j = 0; j < latent; ++j) g(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    ds.embedding = qr.householderQ() * Eigen::MatrixXd::Identity(ambient, latent);
    // Unique QR: positive diagonal of R.
    const Eigen::MatrixXd r = qr.matrixQR().topRows(latent).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < latent; ++j) {
      if (r(j, j) < 0.0) ds.embedding.col(j) *= -1.0;
    }
  }
  {
    Philox rng = root.split(kDirection);
    ds.ood_direction.resize(latent);
    for (Eigen::Index j = 0; j < latent; ++j) ds.ood_direction[j] = rng.normal();
    ds.ood_direction.normalize();
  }

  Philox noise = root.split(kNoise);
  auto draw = [&](Philox rng, int count, const Vector& offset, std::vector<EmbeddingTensor>& out,
                  std::vector<std::string>& ids, const char* prefix) {
    Vector z(latent);
    for (int s = 0; s < count; ++s) {
      for (Eigen::Index j = 0; j < latent; ++j) z[j] = rng.normal() + offset[j];
      Vector x = ds.embedding * z;
      for (Eigen::Index i = 0; i < ambient; ++i) x[i] += spec.noise_sigma * noise.normal();
      out.emplace_back(spec.ambient_shape, std::vector<double>(x.data(), x.data() + x.size()));
      ids.push_back(sample_id(prefix, s));
    }
  };
  const Vector zero = Vector::Zero(latent);
  draw(root.split(kTrain), spec.n_train, zero, ds.train, ds.train_ids, "train");
  draw(root.split(kIdTest), spec.n_id_test, zero, ds.id_test, ds.id_ids, "id");
  draw(root.split(kOodTest), spec.n_ood_test, spec.shift * ds.ood_direction, ds.ood_test,
       ds.ood_ids, "ood");

  for (const auto& id : ds.id_ids) ds.labels.rows.push_back({id, std::nullopt, Label::kId});
  for (const auto& id : ds.ood_ids) ds.labels.rows.push_back({id, std::nullopt, Label::kOod});
  return ds;
}

/// Writes <dir>/npy/<id>.npy, <dir>/manifest.csv and <dir>/labels.csv.
/// Manifest paths are relative to <dir>.
inline void write_dataset(const SyntheticDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "npy");
  std::vector<ManifestEntry> entries;
  auto emit = [&](const std::vector<EmbeddingTensor>& ts, const std::vector<std::string>& ids,
                  Split split) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::filesystem::path rel = std::filesystem::path("npy") / (ids[i] + ".npy");
      write_array(ts[i], dir / rel);
      entries.push_back({ids[i], rel, split});
    }
  };
  emit(ds.train, ds.train_ids, Split::kTrain);
  emit(ds.id_test, ds.id_ids, Split::kTest);
  emit(ds.ood_test, ds.ood_ids, Split::kTest);
  write_manifest(dir / "manifest.csv", entries);
  write_labels(dir / "labels.csv", ds.labels);
}

/// AUROC of a signed 1-D score separating N(shift, 1) from N(0, 1):
/// Phi(shift / sqrt(2)).
inline double oracle_auroc_one_dim(double shift) {
  if (!(shift >= 0.0)) throw ConfigError("shift must be >= 0");
  return 0.5 * std::erfc(-shift / 2.0);
}

}  // namespace mahood
