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

// Standardization and principal component analysis of flattened embeddings.
//
// With far fewer samples than features (337 x 98 304 is typical) the d x d
// covariance is out of reach, so the components are recovered from the
// eigendecomposition of the n x n Gram matrix Z Z^T instead: if Z Z^T u = l u
// then Z^T u / sqrt(l) is a unit eigenvector of Z^T Z with the same
// eigenvalue. Both routes give the same top-rank subspace.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "mahood/errors.hpp"
#include "mahood/log.hpp"
#include "mahood/npy.hpp"
#include "mahood/tensor.hpp"

namespace mahood {

struct Standardizer {
  Vector mean;
  Vector std;  // population standard deviation, clamped to 1 for constant columns

  FeatureMatrix apply(const FeatureMatrix& m) const {
    if (m.cols() != mean.size()) {
      throw DimensionError("standardizer expects " + std::to_string(mean.size()) +
                           " columns, got " + std::to_string(m.cols()));
    }
    return (m.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
  }
};

inline constexpr double kConstantColumnStd = 1e-12;

inline Standardizer fit_standardizer(const FeatureMatrix& train) {
  if (train.rows() < 2) {
    throw SampleSizeError("standardization needs at least 2 rows, got " +
                          std::to_string(train.rows()));
  }
  Standardizer s;
  const double n = static_cast<double>(train.rows());
  s.mean = train.colwise().mean().transpose();
  s.std = ((train.rowwise() - s.mean.transpose()).array().square().colwise().sum() / n)
              .sqrt()
              .transpose();
  for (Eigen::Index j = 0; j < s.std.size(); ++j) {
    if (s.std[j] < kConstantColumnStd) s.std[j] = 1.0;
  }
  return s;
}

struct PcaModel {
  Standardizer standardizer;
  FeatureMatrix components;     // n x d, orthonormal rows
  Vector explained_variance;    // length n, non-increasing

  Eigen::Index n_components() const { return components.rows(); }
  Eigen::Index dim() const { return components.cols(); }
};

namespace pca_detail {

/// Flip each row so its largest-magnitude entry is positive (first such
/// entry on ties).
inline void fix_signs(FeatureMatrix& rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      const double a = std::abs(rows(i, j));
      if (a > best) {
        best = a;
        arg = j;
      }
    }
    if (rows(i, arg) < 0.0) rows.row(i) *= -1.0;
  }
}

/// Replace row `i` by the standard basis vector with the largest component
/// orthogonal to rows [0, i), orthogonalized twice.
inline void complete_basis_row(FeatureMatrix& rows, Eigen::Index i) {
  const auto prev = rows.topRows(i);
  // residual norm^2 of e_k against span(prev) is 1 - ||prev.col(k)||^2
  Eigen::Index best_k = 0;
  if (i > 0) {
    (-prev.colwise().squaredNorm()).maxCoeff(&best_k);
  }
  Vector v = Vector::Zero(rows.cols());
  v[best_k] = 1.0;
  for (int pass = 0; pass < 2; ++pass) v -= prev.transpose() * (prev * v);
  rows.row(i) = v.normalized().transpose();
}

/// Modified Gram-Schmidt over rows, twice.
inline void reorthonormalize(FeatureMatrix& rows) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      for (Eigen::Index k = 0; k < i; ++k) rows.row(i) -= rows.row(i).dot(rows.row(k)) * rows.row(k);
      rows.row(i).normalize();
    }
  }
}

}  // namespace pca_detail

/// Top-`n` principal components of the standardized training matrix.
/// Requesting more components than the numerical rank is allowed up to
/// min(n_train - 1, d); the surplus components get zero explained variance
/// and a warning is emitted.
inline PcaModel fit_pca(const FeatureMatrix& train, Eigen::Index n) {
  const Eigen::Index rows = train.rows();
  const Eigen::Index d = train.cols();
  if (rows < 2) {
    throw SampleSizeError("PCA needs at least 2 training rows, got " + std::to_string(rows));
  }
  const Eigen::Index bound = std::min(rows - 1, d);
  if (n < 1 || n > bound) {
    throw ConfigError("PCA(" + std::to_string(n) + "): n must satisfy 1 <= n <= min(n_train - 1, d) = " +
                      std::to_string(bound));
  }
  PcaModel model;
  model.standardizer = fit_standardizer(train);
  const FeatureMatrix z = model.standardizer.apply(train);
  const double dof = static_cast<double>(rows - 1);

  Vector eigenvalues;   // descending, of Z^T Z restricted to the top n
  FeatureMatrix comps(n, d);
  const bool gram = rows < d;
  if (gram) {
    const Eigen::MatrixXd g = z * z.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    if (eig.info() != Eigen::Success) throw NumericalError("Gram eigendecomposition failed");
    eigenvalues = eig.eigenvalues().reverse().head(n);
    const Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse().leftCols(n);
    comps = (z.transpose() * u).transpose();
  } else {
    const Eigen::MatrixXd c = z.transpose() * z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
    if (eig.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
    eigenvalues = eig.eigenvalues().reverse().head(n);
    comps = eig.eigenvectors().rowwise().reverse().leftCols(n).transpose();
  }

  const double top = std::max(eigenvalues.size() > 0 ? eigenvalues[0] : 0.0, 0.0);
  const double tol = top * static_cast<double>(std::max(rows, d)) *
                     std::numeric_limits<double>::epsilon() * 10.0;
  Eigen::Index rank = 0;
  while (rank < n && eigenvalues[rank] > tol) ++rank;

  if (gram) {
    for (Eigen::Index i = 0; i < rank; ++i) comps.row(i) /= std::sqrt(eigenvalues[i]);
    for (Eigen::Index i = rank; i < n; ++i) pca_detail::complete_basis_row(comps, i);
  }
  pca_detail::reorthonormalize(comps);
  pca_detail::fix_signs(comps);

  model.explained_variance = Vector::Zero(n);
  model.explained_variance.head(rank) = eigenvalues.head(rank) / dof;
  if (rank < n) {
    warn("PCA(" + std::to_string(n) + ") exceeds the numerical rank " + std::to_string(rank) +
         " of the training data; " + std::to_string(n - rank) +
         " component(s) carry zero explained variance");
  }
  model.components = std::move(comps);
  return model;
}

inline FeatureMatrix apply_pca(const PcaModel& model, const FeatureMatrix& m) {
  if (m.cols() != model.dim()) {
    throw DimensionError("PCA model expects " + std::to_string(model.dim()) +
                         " features, got " + std::to_string(m.cols()));
  }
  return model.standardizer.apply(m) * model.components.transpose();
}

inline constexpr int kPcaFormatVersion = 1;

/// mean.npy, std.npy, components.npy, explained_variance.npy, meta.json.
inline void save_pca(const PcaModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_vector(dir / "mean.npy", model.standardizer.mean);
  write_vector(dir / "std.npy", model.standardizer.std);
  write_matrix(dir / "components.npy", model.components);
  write_vector(dir / "explained_variance.npy", model.explained_variance);
  const nlohmann::ordered_json meta = {{"n", model.n_components()},
                                       {"d", model.dim()},
                                       {"format_version", kPcaFormatVersion}};
  std::ofstream out(dir / "meta.json");
  out << meta.dump(2) << '\n';
  if (!out) throw IoError("write failure on " + (dir / "meta.json").string());
}

inline PcaModel load_pca(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw IoError("cannot open " + (dir / "meta.json").string());
  const auto meta = nlohmann::json::parse(in, nullptr, false);
  if (meta.is_discarded() || !meta.contains("n") || !meta.contains("d")) {
    throw DataError((dir / "meta.json").string() + ": malformed PCA metadata");
  }
  if (meta.value("format_version", 0) != kPcaFormatVersion) {
    throw DataError((dir / "meta.json").string() + ": unsupported PCA format version");
  }
  PcaModel m;
  m.standardizer.mean = read_vector(dir / "mean.npy");
  m.standardizer.std = read_vector(dir / "std.npy");
  m.components = read_matrix(dir / "components.npy");
  m.explained_variance = read_vector(dir / "explained_variance.npy");
  const auto n = meta["n"].get<Eigen::Index>();
  const auto d = meta["d"].get<Eigen::Index>();
  if (m.components.rows() != n || m.components.cols() != d || m.standardizer.mean.size() != d ||
      m.standardizer.std.size() != d || m.explained_variance.size() != n) {
    throw DataError(dir.string() + ": PCA arrays disagree with meta.json (n=" +
                    std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }
  return m;
}

}  // namespace mahood
