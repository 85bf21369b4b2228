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

#include <array>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mahood/errors.hpp"

namespace mahood {

/// n_samples x n_features; one reduced embedding per row.
using FeatureMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Extents of a bottleneck activation: channels, depth, height, width.
struct Shape4 {
  std::array<std::size_t, 4> dims{1, 1, 1, 1};

  std::size_t channels() const { return dims[0]; }
  std::size_t depth() const { return dims[1]; }
  std::size_t height() const { return dims[2]; }
  std::size_t width() const { return dims[3]; }

  std::size_t size() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           std::multiplies<>());
  }

  std::string str() const {
    return "(" + std::to_string(dims[0]) + "," + std::to_string(dims[1]) +
           "," + std::to_string(dims[2]) + "," + std::to_string(dims[3]) + ")";
  }

  friend bool operator==(const Shape4&, const Shape4&) = default;
};

/// One sample's bottleneck features, C-order (width fastest).
class EmbeddingTensor {
 public:
  EmbeddingTensor() = default;

  explicit EmbeddingTensor(Shape4 shape, double fill = 0.0)
      : shape_(shape), values_(shape.size(), fill) {}

  EmbeddingTensor(Shape4 shape, std::vector<double> values)
      : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_.size()) {
      throw SizeError("tensor of shape " + shape_.str() + " needs " +
                      std::to_string(shape_.size()) + " values, got " +
                      std::to_string(values_.size()));
    }
    for (auto d : shape_.dims) {
      if (d == 0) throw SizeError("tensor extents must be positive: " + shape_.str());
    }
  }

  const Shape4& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  std::size_t offset(std::size_t c, std::size_t d, std::size_t h,
                     std::size_t w) const {
    return ((c * shape_.dims[1] + d) * shape_.dims[2] + h) * shape_.dims[3] + w;
  }

  double operator()(std::size_t c, std::size_t d, std::size_t h,
                    std::size_t w) const {
    return values_[offset(c, d, h, w)];
  }
  double& operator()(std::size_t c, std::size_t d, std::size_t h,
                     std::size_t w) {
    return values_[offset(c, d, h, w)];
  }

  friend bool operator==(const EmbeddingTensor&, const EmbeddingTensor&) = default;

 private:
  Shape4 shape_;
  std::vector<double> values_;
};

/// C-order flattening.
inline Vector flatten(const EmbeddingTensor& t) {
  const auto v = t.values();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Stack flattened tensors as the rows of a feature matrix.
inline FeatureMatrix stack_rows(std::span<const EmbeddingTensor> tensors) {
  if (tensors.empty()) return FeatureMatrix(0, 0);
  const auto cols = static_cast<Eigen::Index>(tensors.front().size());
  FeatureMatrix m(static_cast<Eigen::Index>(tensors.size()), cols);
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensors[i].shape() != tensors.front().shape()) {
      throw SizeError("non-uniform tensor shapes " + tensors.front().shape().str() +
                      " and " + tensors[i].shape().str());
    }
    m.row(static_cast<Eigen::Index>(i)) = flatten(tensors[i]).transpose();
  }
  return m;
}

}  // namespace mahood
