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

// Exact t-SNE (van der Maaten & Hinton, 2008): Gaussian input affinities
// calibrated to a perplexity, Student-t output affinities, gradient descent
// with momentum, per-parameter gains and early exaggeration. O(N^2) memory
// and time per iteration, intended for a few thousand points at most.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mahood/errors.hpp"
#include "mahood/rng.hpp"
#include "mahood/tensor.hpp"

namespace mahood {

struct TsneConfig {
  int n_components = 2;
  double perplexity = 30.0;
  int n_iter = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iters = 250;
  std::uint64_t seed = 0;

  void validate(Eigen::Index n_samples) const {
    if (n_components < 1) throw ConfigError("t-SNE n_components must be >= 1");
    if (!(perplexity > 0.0)) throw ConfigError("t-SNE perplexity must be > 0");
    if (n_iter < 1) throw ConfigError("t-SNE n_iter must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("t-SNE learning_rate must be > 0");
    if (!(early_exaggeration >= 1.0)) throw ConfigError("t-SNE early_exaggeration must be >= 1");
    if (exaggeration_iters < 0) throw ConfigError("t-SNE exaggeration_iters must be >= 0");
    if (n_samples < 4) {
      throw ConfigError("t-SNE needs at least 4 samples, got " + std::to_string(n_samples));
    }
    const double limit = static_cast<double>(n_samples - 1) / 3.0;
    if (!(perplexity < limit)) {
      throw ConfigError("t-SNE perplexity " + std::to_string(perplexity) +
                        " is infeasible for " + std::to_string(n_samples) +
                        " samples (must be < (N - 1) / 3 = " + std::to_string(limit) + ")");
    }
  }
};

struct TsneResult {
  FeatureMatrix embedding;
  double kl_after_exaggeration = 0.0;  // KL(P || Q) once exaggeration ends
  double kl_final = 0.0;
};

namespace tsne_detail {

inline constexpr double kEntropyTol = 1e-5;
inline constexpr int kSearchIters = 50;
inline constexpr double kMinProb = 1e-12;
inline constexpr double kMinGain = 0.01;
inline constexpr int kMomentumSwitch = 250;
inline constexpr double kInitialMomentum = 0.5;
inline constexpr double kFinalMomentum = 0.8;
inline constexpr double kInitStd = 1e-4;

inline Eigen::MatrixXd squared_distances(const FeatureMatrix& x) {
  const Vector norms = x.rowwise().squaredNorm();
  Eigen::MatrixXd d = -2.0 * x * x.transpose();
  d.colwise() += norms;
  d.rowwise() += norms.transpose();
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();
  return d;
}

/// Conditional affinities p_{j|i}; row i is calibrated by binary search on
/// the Gaussian precision so that its entropy equals log(perplexity).
inline Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& dist, double perplexity) {
  const Eigen::Index n = dist.rows();
  const double target = std::log(perplexity);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  Vector row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Shift by the nearest-neighbour distance so exp() cannot underflow
    // to an all-zero row; entropy is invariant to the shift.
    double dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) dmin = std::min(dmin, dist(i, j));
    }
    double beta = 1.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kSearchIters; ++it) {
      double sum = 0.0;
      double weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) {
          row[j] = 0.0;
          continue;
        }
        const double shifted = dist(i, j) - dmin;
        row[j] = std::exp(-shifted * beta);
        sum += row[j];
        weighted += shifted * row[j];
      }
      const double entropy = std::log(sum) + beta * weighted / sum;
      row /= sum;
      const double diff = entropy - target;
      if (std::abs(diff) < kEntropyTol) break;
      if (diff > 0.0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
      } else {
        hi = beta;
        beta = std::isinf(lo) ? beta / 2.0 : (beta + lo) / 2.0;
      }
    }
    p.row(i) = row.transpose();
  }
  return p;
}

/// Student-t kernel numerators (diagonal zero) and their sum.
inline double student_kernel(const FeatureMatrix& y, Eigen::MatrixXd& num) {
  const Eigen::Index n = y.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    num(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
      num(i, j) = v;
      num(j, i) = v;
      total += 2.0 * v;
    }
  }
  return total;
}

inline double kl_divergence(const Eigen::MatrixXd& p, const FeatureMatrix& y) {
  const Eigen::Index n = y.rows();
  Eigen::MatrixXd num(n, n);
  const double total = student_kernel(y, num);
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = std::max(num(i, j) / total, kMinProb);
      kl += p(i, j) * std::log(p(i, j) / q);
    }
  }
  return kl;
}

/// Symmetrized joint affinities p_ij = (p_{j|i} + p_{i|j}) / 2N.
inline Eigen::MatrixXd joint_affinities(const FeatureMatrix& x, double perplexity) {
  const Eigen::MatrixXd cond = conditional_affinities(squared_distances(x), perplexity);
  Eigen::MatrixXd p = (cond + cond.transpose()) / (2.0 * static_cast<double>(x.rows()));
  p = p.cwiseMax(kMinProb);
  p.diagonal().setZero();
  return p;
}

}  // namespace tsne_detail

/// Embed all rows of `x` jointly. Output is a pure function of (x, config).
inline TsneResult tsne_embed(const FeatureMatrix& x, const TsneConfig& config) {
  using namespace tsne_detail;
  const Eigen::Index n = x.rows();
  config.validate(n);
  const Eigen::Index dims = config.n_components;

  const Eigen::MatrixXd p = joint_affinities(x, config.perplexity);

  Philox rng(config.seed);
  FeatureMatrix y(n, dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < dims; ++c) y(i, c) = kInitStd * rng.normal();
  }
  FeatureMatrix velocity = FeatureMatrix::Zero(n, dims);
  FeatureMatrix gains = FeatureMatrix::Ones(n, dims);
  FeatureMatrix grad(n, dims);
  Eigen::MatrixXd num(n, n);

  TsneResult result;
  if (config.exaggeration_iters == 0) result.kl_after_exaggeration = kl_divergence(p, y);

  for (int iter = 0; iter < config.n_iter; ++iter) {
    const double exaggeration = iter < config.exaggeration_iters ? config.early_exaggeration : 1.0;
    const double total = student_kernel(y, num);
    grad.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double q = std::max(num(i, j) / total, kMinProb);
        const double w = (exaggeration * p(i, j) - q) * num(i, j);
        grad.row(i) += w * (y.row(i) - y.row(j));
      }
    }
    grad *= 4.0;

    const double momentum = iter < kMomentumSwitch ? kInitialMomentum : kFinalMomentum;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < dims; ++c) {
        const bool same_sign = (grad(i, c) > 0.0) == (velocity(i, c) > 0.0);
        gains(i, c) = std::max(same_sign ? gains(i, c) * 0.8 : gains(i, c) + 0.2, kMinGain);
        velocity(i, c) = momentum * velocity(i, c) - config.learning_rate * gains(i, c) * grad(i, c);
      }
    }
    y += velocity;
    const Eigen::RowVectorXd centroid = y.colwise().mean();
    y.rowwise() -= centroid;

    if (iter + 1 == config.exaggeration_iters) result.kl_after_exaggeration = kl_divergence(p, y);
  }
  result.kl_final = kl_divergence(p, y);
  if (config.exaggeration_iters > config.n_iter) result.kl_after_exaggeration = result.kl_final;
  result.embedding = std::move(y);
  return result;
}

}  // namespace mahood
