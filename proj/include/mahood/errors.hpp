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

#include <stdexcept>
#include <string>

namespace mahood {

/// Broad failure classes. The CLI maps them onto process exit codes.
enum class ErrorClass {
  kUsage = 1,      // bad flags, bad configuration
  kData = 2,       // unreadable, malformed or inconsistent input
  kNumerical = 3,  // singular covariance and friends
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), class_(cls) {}

  ErrorClass error_class() const noexcept { return class_; }
  int exit_code() const noexcept { return static_cast<int>(class_); }

 private:
  ErrorClass class_;
};

#define MAHOOD_DEFINE_ERROR(Name, Class)                          \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(Class, what) {} \
  }

MAHOOD_DEFINE_ERROR(ConfigError, ErrorClass::kUsage);
MAHOOD_DEFINE_ERROR(IoError, ErrorClass::kData);
MAHOOD_DEFINE_ERROR(FormatError, ErrorClass::kData);
MAHOOD_DEFINE_ERROR(RankError, ErrorClass::kData);
MAHOOD_DEFINE_ERROR(DataError, ErrorClass::kData);
MAHOOD_DEFINE_ERROR(SizeError, ErrorClass::kData);
MAHOOD_DEFINE_ERROR(DimensionError, ErrorClass::kData);
MAHOOD_DEFINE_ERROR(SampleSizeError, ErrorClass::kData);
MAHOOD_DEFINE_ERROR(DegenerateInputError, ErrorClass::kData);
MAHOOD_DEFINE_ERROR(NumericalError, ErrorClass::kNumerical);

#undef MAHOOD_DEFINE_ERROR

/// Cholesky breakdown of an unregularized covariance.
class SingularCovarianceError : public NumericalError {
 public:
  SingularCovarianceError(std::size_t dim, std::size_t n_fit, std::size_t pivot,
                          const std::string& detail)
      : NumericalError("singular covariance: d=" + std::to_string(dim) +
                       ", n=" + std::to_string(n_fit) + ", failing pivot " +
                       std::to_string(pivot) + " (" + detail + ")"),
        dim_(dim),
        n_fit_(n_fit),
        pivot_(pivot) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t n_fit() const noexcept { return n_fit_; }
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t dim_;
  std::size_t n_fit_;
  std::size_t pivot_;
};

}  // namespace mahood
