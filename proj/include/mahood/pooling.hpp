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

#include <cstddef>
#include <string>

#include "mahood/errors.hpp"
#include "mahood/tensor.hpp"

namespace mahood {

/// Average pooling without padding. dims = 2 pools (H, W) for every (C, D)
/// slice; dims = 3 pools (D, H, W) for every channel.
struct PoolingSpec {
  int dims = 3;
  std::size_t kernel = 2;  // j
  std::size_t stride = 1;  // k

  std::string label() const {
    return "AveragePool" + std::to_string(dims) + "D(" + std::to_string(kernel) + ", " +
           std::to_string(stride) + ")";
  }

  void validate() const {
    if (dims != 2 && dims != 3) {
      throw ConfigError("pooling dims must be 2 or 3, got " + std::to_string(dims));
    }
    if (kernel < 1 || stride < 1) throw ConfigError("pooling kernel and stride must be >= 1");
  }
};

inline std::size_t pooled_length(std::size_t length, std::size_t kernel, std::size_t stride) {
  return (length - kernel) / stride + 1;
}

inline Shape4 pooled_shape(const Shape4& in, const PoolingSpec& spec) {
  spec.validate();
  static constexpr const char* kAxis[] = {"C", "D", "H", "W"};
  Shape4 out = in;
  for (int axis = 4 - spec.dims; axis < 4; ++axis) {
    const auto len = in.dims[static_cast<std::size_t>(axis)];
    if (len < spec.kernel) {
      throw SizeError(std::string("pooling axis ") + kAxis[axis] + " has length " +
                      std::to_string(len) + ", shorter than kernel " +
                      std::to_string(spec.kernel));
    }
    out.dims[static_cast<std::size_t>(axis)] = pooled_length(len, spec.kernel, spec.stride);
  }
  return out;
}

inline EmbeddingTensor average_pool(const EmbeddingTensor& t, const PoolingSpec& spec) {
  const Shape4 out_shape = pooled_shape(t.shape(), spec);
  EmbeddingTensor out(out_shape);
  const std::size_t j = spec.kernel;
  const std::size_t k = spec.stride;
  // Depth window is a single cell when only (H, W) are pooled.
  const std::size_t dj = spec.dims == 3 ? j : 1;
  const std::size_t dk = spec.dims == 3 ? k : 1;
  const auto cells = static_cast<double>(dj * j * j);
  for (std::size_t c = 0; c < out_shape.channels(); ++c) {
    for (std::size_t od = 0; od < out_shape.depth(); ++od) {
      for (std::size_t oh = 0; oh < out_shape.height(); ++oh) {
        for (std::size_t ow = 0; ow < out_shape.width(); ++ow) {
          double sum = 0.0;
          for (std::size_t d = od * dk; d < od * dk + dj; ++d) {
            for (std::size_t h = oh * k; h < oh * k + j; ++h) {
              for (std::size_t w = ow * k; w < ow * k + j; ++w) sum += t(c, d, h, w);
            }
          }
          out(c, od, oh, ow) = sum / cells;
        }
      }
    }
  }
  return out;
}

}  // namespace mahood
