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

// NPY array files: read versions 1.0 and 2.0, write version 1.0.
// Only little-endian float32/float64 in C order are accepted; everything is
// widened to double on load.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mahood/errors.hpp"
#include "mahood/tensor.hpp"

namespace mahood {

/// A dense array of any rank as stored in an NPY file.
struct NpyArray {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  std::size_t rank() const { return shape.size(); }
};

namespace npy_detail {

inline constexpr char kMagic[] = "\x93NUMPY";
inline constexpr std::size_t kMagicLen = 6;

template <typename T>
T load_le(const unsigned char* p) {
  T v{};
  std::memcpy(&v, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
  return v;
}

[[noreturn]] inline void fail_at(const std::filesystem::path& path, std::size_t offset,
                                 const std::string& what) {
  throw FormatError(path.string() + ": malformed NPY at byte offset " +
                    std::to_string(offset) + ": " + what);
}

/// Parser for the Python dict literal in the NPY header. Offsets reported
/// in errors are absolute file offsets.
class HeaderParser {
 public:
  HeaderParser(std::string_view text, std::size_t base, const std::filesystem::path& path)
      : text_(text), base_(base), path_(path) {}

  struct Result {
    std::string descr;
    bool fortran_order = true;
    std::vector<std::size_t> shape;
    bool has_descr = false, has_order = false, has_shape = false;
  };

  Result parse() {
    Result r;
    skip_ws();
    expect('{');
    while (true) {
      skip_ws();
      if (peek() == '}') {
        ++pos_;
        break;
      }
      const std::size_t key_at = pos_;
      const std::string key = parse_string();
      skip_ws();
      expect(':');
      skip_ws();
      if (key == "descr") {
        r.descr = parse_string();
        r.has_descr = true;
      } else if (key == "fortran_order") {
        r.fortran_order = parse_bool();
        r.has_order = true;
      } else if (key == "shape") {
        r.shape = parse_shape();
        r.has_shape = true;
      } else {
        fail(key_at, "unexpected header key '" + key + "'");
      }
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      skip_ws();
      expect('}');
      break;
    }
    if (!r.has_descr || !r.has_order || !r.has_shape) {
      fail(pos_, "header must define descr, fortran_order and shape");
    }
    return r;
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    fail_at(path_, base_ + at, what);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    if (peek() != c) fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string parse_string() {
    const char q = peek();
    if (q != '\'' && q != '"') fail(pos_, "expected quoted string");
    const std::size_t start = ++pos_;
    while (pos_ < text_.size() && text_[pos_] != q) ++pos_;
    if (pos_ >= text_.size()) fail(start, "unterminated string");
    return std::string(text_.substr(start, pos_++ - start));
  }

  bool parse_bool() {
    if (text_.substr(pos_, 4) == "True") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "False") {
      pos_ += 5;
      return false;
    }
    fail(pos_, "expected True or False");
  }

  std::vector<std::size_t> parse_shape() {
    std::vector<std::size_t> dims;
    expect('(');
    while (true) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        return dims;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(pos_, "expected dimension");
      std::size_t v = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        v = v * 10 + static_cast<std::size_t>(text_[pos_++] - '0');
      }
      // numpy may print sizes as 3L on old Pythons
      if (peek() == 'L') ++pos_;
      dims.push_back(v);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ')') {
        fail(pos_, "expected ',' or ')' in shape");
      }
    }
  }

  std::string_view text_;
  std::size_t base_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

inline std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());
  return bytes;
}

inline std::string shape_literal(std::span<const std::size_t> shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  if (shape.size() == 1) s += ",";
  return s + ")";
}

}  // namespace npy_detail

/// Load an NPY array of any rank, widening to double. Rejects non-finite
/// payload values.
inline NpyArray read_npy(const std::filesystem::path& path) {
  using namespace npy_detail;
  const auto bytes = slurp(path);
  if (bytes.size() < kMagicLen || std::memcmp(bytes.data(), kMagic, kMagicLen) != 0) {
    fail_at(path, 0, "missing \\x93NUMPY magic");
  }
  if (bytes.size() < 10) fail_at(path, kMagicLen, "truncated version/header length");
  const unsigned major = bytes[6];
  const unsigned minor = bytes[7];
  std::size_t header_len = 0;
  std::size_t header_start = 0;
  if (major == 1 && minor == 0) {
    header_len = load_le<std::uint16_t>(&bytes[8]);
    header_start = 10;
  } else if (major == 2 && minor == 0) {
    if (bytes.size() < 12) fail_at(path, 8, "truncated header length");
    header_len = load_le<std::uint32_t>(&bytes[8]);
    header_start = 12;
  } else {
    fail_at(path, 6, "unsupported NPY version " + std::to_string(major) + "." +
                         std::to_string(minor));
  }
  if (header_start + header_len > bytes.size()) {
    fail_at(path, header_start, "header length " + std::to_string(header_len) +
                                    " runs past end of file");
  }
  const std::string_view header(reinterpret_cast<const char*>(bytes.data()) + header_start,
                                header_len);
  const auto h = HeaderParser(header, header_start, path).parse();

  std::size_t item = 0;
  if (h.descr == "<f8") {
    item = 8;
  } else if (h.descr == "<f4") {
    item = 4;
  } else {
    fail_at(path, header_start, "unsupported descr '" + h.descr +
                                    "' (only '<f4' and '<f8' are accepted)");
  }
  if (h.fortran_order) fail_at(path, header_start, "fortran_order arrays are not accepted");

  std::size_t count = 1;
  for (auto d : h.shape) count *= d;
  const std::size_t payload = header_start + header_len;
  if (bytes.size() - payload != count * item) {
    fail_at(path, payload, "payload holds " + std::to_string(bytes.size() - payload) +
                               " bytes, shape " + shape_literal(h.shape) + " needs " +
                               std::to_string(count * item));
  }

  NpyArray out;
  out.shape = h.shape;
  out.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* p = &bytes[payload + i * item];
    const double v = item == 8 ? load_le<double>(p) : static_cast<double>(load_le<float>(p));
    if (!std::isfinite(v)) {
      throw DataError(path.string() + ": non-finite value at flat index " + std::to_string(i));
    }
    out.data[i] = v;
  }
  return out;
}

/// Write a float64 C-order NPY v1.0 file.
inline void write_npy(const std::filesystem::path& path, std::span<const std::size_t> shape,
                      std::span<const double> data) {
  using namespace npy_detail;
  std::size_t count = 1;
  for (auto d : shape) count *= d;
  if (count != data.size()) {
    throw SizeError("write_npy: shape " + shape_literal(shape) + " does not match " +
                    std::to_string(data.size()) + " values");
  }
  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': " +
                       shape_literal(shape) + ", }";
  // Pad with spaces so the payload starts on a 64-byte boundary.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');
  if (header.size() > 0xFFFF) throw SizeError("NPY header too long for version 1.0");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic, kMagicLen);
  const char version[2] = {1, 0};
  out.write(version, 2);
  const auto len = static_cast<std::uint16_t>(header.size());
  const char len_le[2] = {static_cast<char>(len & 0xFF), static_cast<char>(len >> 8)};
  out.write(len_le, 2);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
  } else {
    for (double v : data) {
      auto b = std::bit_cast<std::array<char, 8>>(v);
      std::reverse(b.begin(), b.end());
      out.write(b.data(), 8);
    }
  }
  if (!out) throw IoError("write failure on " + path.string());
}

/// Read a rank-4 embedding tensor.
inline EmbeddingTensor read_array(const std::filesystem::path& path) {
  auto arr = read_npy(path);
  if (arr.rank() != 4) {
    throw RankError(path.string() + ": expected a 4-axis (C,D,H,W) array, got rank " +
                    std::to_string(arr.rank()));
  }
  Shape4 shape{{arr.shape[0], arr.shape[1], arr.shape[2], arr.shape[3]}};
  return EmbeddingTensor(shape, std::move(arr.data));
}

inline void write_array(const EmbeddingTensor& t, const std::filesystem::path& path) {
  write_npy(path, t.shape().dims, t.values());
}

// Matrix helpers: Eigen is column-major, NPY here is C-order.

inline void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  const std::size_t shape[2] = {static_cast<std::size_t>(m.rows()),
                                static_cast<std::size_t>(m.cols())};
  write_npy(path, shape, std::span<const double>(rm.data(), static_cast<std::size_t>(rm.size())));
}

inline void write_vector(const std::filesystem::path& path, const Eigen::VectorXd& v) {
  const std::size_t shape[1] = {static_cast<std::size_t>(v.size())};
  write_npy(path, shape, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

inline Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  const auto arr = read_npy(path);
  if (arr.rank() != 2) {
    throw RankError(path.string() + ": expected a 2-axis array, got rank " +
                    std::to_string(arr.rank()));
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(arr.data.data(), static_cast<Eigen::Index>(arr.shape[0]),
                                    static_cast<Eigen::Index>(arr.shape[1]));
}

inline Eigen::VectorXd read_vector(const std::filesystem::path& path) {
  const auto arr = read_npy(path);
  if (arr.rank() != 1) {
    throw RankError(path.string() + ": expected a 1-axis array, got rank " +
                    std::to_string(arr.rank()));
  }
  return Eigen::Map<const Eigen::VectorXd>(arr.data.data(),
                                           static_cast<Eigen::Index>(arr.shape[0]));
}

}  // namespace mahood
