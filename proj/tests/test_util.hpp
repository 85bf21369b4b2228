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

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include <Eigen/Dense>

#include "mahood/dataset.hpp"
#include "mahood/metrics.hpp"

namespace mahood::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("mahood_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

/// Well-conditioned random SPD matrix: A A^T / d + I.
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index d) {
  const Eigen::MatrixXd a = random_matrix(rng, d, d);
  return a * a.transpose() / static_cast<double>(d) + Eigen::MatrixXd::Identity(d, d);
}

/// O(n^2) pairwise AUROC oracle: wins + ties/2 over all (OOD, ID) pairs.
inline double brute_force_auroc(const std::vector<ScoredSample>& s) {
  double wins = 0.0;
  double pairs = 0.0;
  for (const auto& a : s) {
    if (a.label != Label::kOod) continue;
    for (const auto& b : s) {
      if (b.label != Label::kId) continue;
      pairs += 1.0;
      if (a.score > b.score) wins += 1.0;
      else if (a.score == b.score) wins += 0.5;
    }
  }
  return wins / pairs;
}

inline std::vector<ScoredSample> samples(std::initializer_list<double> ood,
                                         std::initializer_list<double> id) {
  std::vector<ScoredSample> out;
  int i = 0;
  for (double s : ood) out.push_back({"o" + std::to_string(i++), s, Label::kOod});
  for (double s : id) out.push_back({"i" + std::to_string(i++), s, Label::kId});
  return out;
}

}  // namespace mahood::testing
