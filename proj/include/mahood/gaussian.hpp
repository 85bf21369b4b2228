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

// Multivariate Gaussian fit and Mahalanobis scoring.
//
// D(x) = sqrt((x - mu)^T Sigma^{-1} (x - mu)) is evaluated as ||L^{-1}(x - mu)||
// with L the Cholesky factor of the (optionally ridge-regularized) sample
// covariance. The explicit inverse is only ever formed for timing.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "mahood/errors.hpp"
#include "mahood/npy.hpp"
#include "mahood/tensor.hpp"

namespace mahood {

/// Ridge added to the sample covariance before factorization.
struct EpsilonPolicy {
  enum class Kind { kNone, kAbsolute, kRelative };

  Kind kind = Kind::kRelative;
  double value = 1e-6;

  static EpsilonPolicy none() { return {Kind::kNone, 0.0}; }
  static EpsilonPolicy absolute(double eps) { return {Kind::kAbsolute, eps}; }
  static EpsilonPolicy relative(double rho) { return {Kind::kRelative, rho}; }

  /// "none", "absolute:<eps>" or "relative:<rho>" (abs:/rel: also accepted).
  static EpsilonPolicy parse(const std::string& text) {
    if (text == "none") return none();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
      const std::string head = text.substr(0, colon);
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("bad epsilon value in '" + text + "'");
      }
      if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("epsilon must be finite and >= 0");
      if (head == "absolute" || head == "abs") return absolute(v);
      if (head == "relative" || head == "rel") return relative(v);
    }
    throw ConfigError("epsilon policy must be none, absolute:<eps> or relative:<rho>, got '" +
                      text + "'");
  }

  std::string str() const {
    switch (kind) {
      case Kind::kNone: return "none";
      case Kind::kAbsolute: return "absolute:" + format(value);
      case Kind::kRelative: return "relative:" + format(value);
    }
    return "none";
  }

  friend bool operator==(const EpsilonPolicy&, const EpsilonPolicy&) = default;

 private:
  // Shortest text that parses back to the same double.
  static std::string format(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  }
};

/// How Sigma^{-1} is applied. The pseudo-inverse route drops null-space
/// directions instead of regularizing them and exists to emulate a
/// full-dimension baseline.
enum class CovarianceSolver { kCholesky, kPseudoInverse };

struct GaussianOptions {
  CovarianceSolver solver = CovarianceSolver::kCholesky;
  /// Refuse to materialize a d x d covariance larger than this.
  std::uint64_t max_covariance_bytes = std::uint64_t{8} << 30;
};

struct GaussianModel {
  Vector mean;
  Eigen::MatrixXd covariance;  // sample covariance, divisor n - 1, unregularized
  Eigen::MatrixXd factor;      // lower Cholesky factor of covariance + epsilon I
  Eigen::MatrixXd whitening;   // pseudo-inverse route: r x d, W^T W = pinv(Sigma)
  double epsilon = 0.0;
  EpsilonPolicy policy = EpsilonPolicy::none();
  CovarianceSolver solver = CovarianceSolver::kCholesky;
  Eigen::Index n_fit = 0;

  Eigen::Index dim() const { return mean.size(); }

  /// The matrix whose inverse defines the distance.
  Eigen::MatrixXd regularized_covariance() const {
    Eigen::MatrixXd c = covariance;
    c.diagonal().array() += epsilon;
    return c;
  }
};

namespace gaussian_detail {

inline void check_size(Eigen::Index d, const GaussianOptions& opt) {
  const auto bytes = static_cast<long double>(d) * static_cast<long double>(d) * 8.0L;
  if (bytes > static_cast<long double>(opt.max_covariance_bytes)) {
    throw NumericalError("a " + std::to_string(d) + " x " + std::to_string(d) +
                         " covariance needs " +
                         std::to_string(static_cast<double>(bytes / (1ULL << 30))) +
                         " GiB, above the configured limit of " +
                         std::to_string(static_cast<double>(opt.max_covariance_bytes) /
                                        static_cast<double>(1ULL << 30)) +
                         " GiB");
  }
}

/// In-place blocked lower Cholesky. Returns the 0-based failing pivot, or -1
/// on success. The strict upper triangle is zeroed.
inline Eigen::Index cholesky_lower(Eigen::MatrixXd& a) {
  const Eigen::Index failed = Eigen::internal::llt_inplace<double, Eigen::Lower>::blocked(a);
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return failed;
}

/// Pivots this small relative to their diagonal entry mean the leading minor
/// is singular to working precision even though the factorization went through.
inline Eigen::Index tiny_pivot(const Eigen::MatrixXd& factor, const Eigen::MatrixXd& a) {
  const double tol = static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon();
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const double pivot = factor(j, j) * factor(j, j);
    if (!(pivot > tol * a(j, j))) return j;
  }
  return -1;
}

inline void factorize(GaussianModel& m) {
  const Eigen::Index d = m.dim();
  m.factor = m.regularized_covariance();
  const Eigen::Index failed = cholesky_lower(m.factor);
  if (failed >= 0) {
    throw SingularCovarianceError(static_cast<std::size_t>(d), static_cast<std::size_t>(m.n_fit),
                                  static_cast<std::size_t>(failed),
                                  "Cholesky of covariance + " + std::to_string(m.epsilon) +
                                      " I is not positive definite");
  }
  if (m.policy.kind == EpsilonPolicy::Kind::kNone) {
    const Eigen::Index tiny = tiny_pivot(m.factor, m.covariance);
    if (tiny >= 0) {
      throw SingularCovarianceError(static_cast<std::size_t>(d),
                                    static_cast<std::size_t>(m.n_fit),
                                    static_cast<std::size_t>(tiny),
                                    "pivot vanishes to working precision");
    }
  }
}

/// Pseudo-inverse whitening from the centered data, via the smaller of the
/// Gram and covariance eigenproblems.
inline Eigen::MatrixXd pinv_whitening(const Eigen::MatrixXd& centered, double dof) {
  const Eigen::Index n = centered.rows();
  const Eigen::Index d = centered.cols();
  Vector lambda;
  Eigen::MatrixXd vectors;  // d x k
  if (n < d) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered * centered.transpose() / dof);
    lambda = eig.eigenvalues();
    vectors = centered.transpose() * eig.eigenvectors();
    for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
      const double norm = vectors.col(i).norm();
      if (norm > 0.0) vectors.col(i) /= norm;
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered.transpose() * centered / dof);
    lambda = eig.eigenvalues();
    vectors = eig.eigenvectors();
  }
  const double top = lambda.size() ? lambda.maxCoeff() : 0.0;
  const double cutoff =
      top * static_cast<double>(std::max(n, d)) * std::numeric_limits<double>::epsilon();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = lambda.size() - 1; i >= 0; --i) {
    if (lambda[i] > cutoff) keep.push_back(i);
  }
  Eigen::MatrixXd w(static_cast<Eigen::Index>(keep.size()), d);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const auto i = keep[r];
    w.row(static_cast<Eigen::Index>(r)) = vectors.col(i).transpose() / std::sqrt(lambda[i]);
  }
  return w;
}

}  // namespace gaussian_detail

/// Fit mean and sample covariance (divisor n - 1) and factor the
/// regularized covariance. Under EpsilonPolicy::none() a singular covariance
/// is an error; it is never silently regularized.
inline GaussianModel fit_gaussian(const FeatureMatrix& features,
                                  EpsilonPolicy policy = EpsilonPolicy::relative(1e-6),
                                  const GaussianOptions& options = {}) {
  using namespace gaussian_detail;
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (n < 2) {
    throw SampleSizeError("Gaussian fit needs at least 2 samples, got " + std::to_string(n));
  }
  if (d < 1) throw DimensionError("Gaussian fit needs at least one feature");

  GaussianModel m;
  m.policy = policy;
  m.solver = options.solver;
  m.n_fit = n;
  m.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - m.mean.transpose();
  const double dof = static_cast<double>(n - 1);

  if (options.solver == CovarianceSolver::kPseudoInverse) {
    m.whitening = pinv_whitening(centered, dof);
    return m;
  }

  if (policy.kind == EpsilonPolicy::Kind::kNone && n <= d) {
    // rank(Sigma) <= n - 1 < d: the leading n x n minor is already singular.
    throw SingularCovarianceError(static_cast<std::size_t>(d), static_cast<std::size_t>(n),
                                  static_cast<std::size_t>(n - 1),
                                  "sample covariance has rank <= n - 1 < d");
  }
  check_size(d, options);
  m.covariance = Eigen::MatrixXd(d, d);
  m.covariance.setZero();
  m.covariance.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / dof);
  m.covariance.triangularView<Eigen::StrictlyUpper>() = m.covariance.transpose();

  switch (policy.kind) {
    case EpsilonPolicy::Kind::kNone: m.epsilon = 0.0; break;
    case EpsilonPolicy::Kind::kAbsolute: m.epsilon = policy.value; break;
    case EpsilonPolicy::Kind::kRelative:
      m.epsilon = policy.value * m.covariance.trace() / static_cast<double>(d);
      break;
  }
  factorize(m);
  return m;
}

inline double mahalanobis(const GaussianModel& model, const Eigen::Ref<const Vector>& x) {
  if (x.size() != model.dim()) {
    throw DimensionError("mahalanobis: model has d=" + std::to_string(model.dim()) +
                         ", point has " + std::to_string(x.size()));
  }
  const Vector diff = x - model.mean;
  if (model.solver == CovarianceSolver::kPseudoInverse) return (model.whitening * diff).norm();
  return model.factor.triangularView<Eigen::Lower>().solve(diff).norm();
}

inline Vector mahalanobis_batch(const GaussianModel& model, const FeatureMatrix& m) {
  if (m.cols() != model.dim()) {
    throw DimensionError("mahalanobis: model has d=" + std::to_string(model.dim()) +
                         ", batch has " + std::to_string(m.cols()) + " columns");
  }
  const Eigen::MatrixXd diff = (m.rowwise() - model.mean.transpose()).transpose();
  if (model.solver == CovarianceSolver::kPseudoInverse) {
    return (model.whitening * diff).colwise().norm().transpose();
  }
  return model.factor.triangularView<Eigen::Lower>().solve(diff).colwise().norm().transpose();
}

struct TimedInverse {
  Eigen::MatrixXd inverse;
  double seconds = 0.0;
};

/// Dense inverse of the regularized covariance (pseudo-inverse for that
/// solver), timed on a monotonic clock.
inline TimedInverse invert_covariance_timed(const GaussianModel& model) {
  using Clock = std::chrono::steady_clock;
  TimedInverse out;
  const auto start = Clock::now();
  if (model.solver == CovarianceSolver::kPseudoInverse) {
    gaussian_detail::check_size(model.dim(), {});
    out.inverse = model.whitening.transpose() * model.whitening;
  } else {
    // inv = L^-T L^-1
    Eigen::MatrixXd linv = Eigen::MatrixXd::Identity(model.dim(), model.dim());
    model.factor.triangularView<Eigen::Lower>().solveInPlace(linv);
    out.inverse = Eigen::MatrixXd::Zero(model.dim(), model.dim());
    out.inverse.selfadjointView<Eigen::Lower>().rankUpdate(linv.transpose());
    out.inverse.triangularView<Eigen::StrictlyUpper>() = out.inverse.transpose();
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

struct Ellipse {
  Eigen::Vector2d center;
  Eigen::Vector2d semi_axes;  // major, minor
  double angle = 0.0;         // major axis vs the first coordinate, in (-pi/2, pi/2]
  double n_std = 1.0;

  /// Point on the boundary at parameter t.
  Eigen::Vector2d point(double t) const {
    const Eigen::Vector2d major(std::cos(angle), std::sin(angle));
    const Eigen::Vector2d minor(-std::sin(angle), std::cos(angle));
    return center + semi_axes[0] * std::cos(t) * major + semi_axes[1] * std::sin(t) * minor;
  }
};

/// Level set of Mahalanobis distance `n_std` for a 2-D model, using the
/// same (regularized) covariance the distance uses.
inline Ellipse covariance_ellipse(const GaussianModel& model, double n_std) {
  if (model.dim() != 2) {
    throw DimensionError("covariance ellipses need a 2-D model, got d=" +
                         std::to_string(model.dim()));
  }
  if (!(n_std > 0.0)) throw ConfigError("n_std must be positive");
  Eigen::Matrix2d cov;
  if (model.solver == CovarianceSolver::kPseudoInverse) {
    const Eigen::Matrix2d precision = model.whitening.transpose() * model.whitening;
    cov = precision.inverse();
  } else {
    cov = model.factor * model.factor.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const Eigen::Vector2d lambda = eig.eigenvalues();  // ascending
  Ellipse e;
  e.center = model.mean;
  e.n_std = n_std;
  e.semi_axes = Eigen::Vector2d(n_std * std::sqrt(std::max(lambda[1], 0.0)),
                                n_std * std::sqrt(std::max(lambda[0], 0.0)));
  if (lambda[1] - lambda[0] <= 1e-14 * std::abs(lambda[1])) {
    e.angle = 0.0;
    return e;
  }
  const Eigen::Vector2d v = eig.eigenvectors().col(1);
  double angle = std::atan2(v[1], v[0]);
  if (angle <= -std::numbers::pi / 2) angle += std::numbers::pi;
  if (angle > std::numbers::pi / 2) angle -= std::numbers::pi;
  e.angle = angle;
  return e;
}

inline void save_gaussian(const GaussianModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_vector(dir / "mean.npy", model.mean);
  if (model.solver == CovarianceSolver::kPseudoInverse) {
    write_matrix(dir / "whitening.npy", model.whitening);
  } else {
    write_matrix(dir / "covariance.npy", model.covariance);
  }
  const nlohmann::ordered_json meta = {
      {"epsilon", model.epsilon},
      {"d", model.dim()},
      {"n_fit", model.n_fit},
      {"policy", model.policy.str()},
      {"solver", model.solver == CovarianceSolver::kCholesky ? "cholesky" : "pseudo_inverse"}};
  std::ofstream out(dir / "meta.json");
  out << meta.dump(2) << '\n';
  if (!out) throw IoError("write failure on " + (dir / "meta.json").string());
}

/// Reload and refactor. The factorization is deterministic, so distances
/// are bit-identical to those of the saved model.
inline GaussianModel load_gaussian(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw IoError("cannot open " + (dir / "meta.json").string());
  const auto meta = nlohmann::json::parse(in, nullptr, false);
  if (meta.is_discarded() || !meta.contains("d") || !meta.contains("epsilon") ||
      !meta.contains("n_fit")) {
    throw DataError((dir / "meta.json").string() + ": malformed Gaussian metadata");
  }
  GaussianModel m;
  m.mean = read_vector(dir / "mean.npy");
  m.epsilon = meta["epsilon"].get<double>();
  m.n_fit = meta["n_fit"].get<Eigen::Index>();
  m.policy = EpsilonPolicy::parse(meta.value("policy", std::string("none")));
  const auto d = meta["d"].get<Eigen::Index>();
  if (m.mean.size() != d) throw DataError(dir.string() + ": mean length disagrees with meta.json");
  if (meta.value("solver", std::string("cholesky")) == "pseudo_inverse") {
    m.solver = CovarianceSolver::kPseudoInverse;
    m.whitening = read_matrix(dir / "whitening.npy");
    if (m.whitening.cols() != d) throw DataError(dir.string() + ": whitening shape mismatch");
    return m;
  }
  m.covariance = read_matrix(dir / "covariance.npy");
  if (m.covariance.rows() != d || m.covariance.cols() != d) {
    throw DataError(dir.string() + ": covariance shape disagrees with meta.json");
  }
  gaussian_detail::factorize(m);
  return m;
}

}  // namespace mahood
