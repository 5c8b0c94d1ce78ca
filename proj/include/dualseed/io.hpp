// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Matrix and dataset files.
//
// Matrix ("LAPM"): magic, u8 version = 1, u32 n, u8 flags (bit 0: has
// sentinel), f64 sentinel, n*n f64 row-major.
//
// Dataset ("LAPD"): magic, u8 version = 1, u32 record count, then per record
// an embedded matrix block, u32 n, u* (n f64), v* (n f64), M* (n u32
// columns); then u32 named-tensor count and per tensor: name, u32 rows,
// u32 cols, rows*cols f64 row-major. Features are not stored; they are
// recomputed on load.
//
// Everything little-endian.

#ifndef DUALSEED_IO_HPP_
#define DUALSEED_IO_HPP_

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dualseed/binary_io.hpp"
#include "dualseed/cost_matrix.hpp"
#include "dualseed/error.hpp"
#include "dualseed/features.hpp"
#include "dualseed/pipeline_config.hpp"
#include "dualseed/rowdualnet.hpp"

namespace dualseed {

inline constexpr std::string_view kMatrixMagic = "LAPM";
inline constexpr std::string_view kDatasetMagic = "LAPD";
inline constexpr std::uint8_t kFormatVersion = 1;

namespace detail {

inline void EncodeMatrixBody(ByteWriter& w, const CostMatrix& c) {
  w.Bytes(kMatrixMagic);
  w.U8(kFormatVersion);
  w.U32(static_cast<std::uint32_t>(c.size()));
  w.U8(c.sentinel() ? 1 : 0);
  w.F64(c.sentinel().value_or(0.0));
  for (double x : c.values()) w.F64(x);
}

inline void ExpectMagic(ByteReader& r, std::string_view magic) {
  if (r.Bytes(magic.size()) != magic) {
    throw Error(ErrorCode::kBadMagic, "expected '" + std::string(magic) + "' header");
  }
}

inline void ExpectVersion(ByteReader& r) {
  const std::uint8_t v = r.U8();
  if (v != kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch, "unsupported format version " + std::to_string(v));
  }
}

inline CostMatrix DecodeMatrixBody(ByteReader& r) {
  ExpectMagic(r, kMatrixMagic);
  ExpectVersion(r);
  const std::uint32_t n = r.U32();
  const std::uint8_t flags = r.U8();
  const double sentinel = r.F64();
  const std::uint64_t count = static_cast<std::uint64_t>(n) * n;
  if (count * 8 > r.remaining()) {
    throw Error(ErrorCode::kTruncatedFile, "matrix data shorter than n*n entries");
  }
  std::vector<double> vals(count);
  for (auto& x : vals) x = r.F64();
  std::optional<double> s;
  if (flags & 1) s = sentinel;
  return CostMatrix(n, std::move(vals), s);
}

}  // namespace detail

inline std::vector<std::uint8_t> EncodeMatrix(const CostMatrix& c) {
  ByteWriter w;
  detail::EncodeMatrixBody(w, c);
  return w.bytes();
}

inline CostMatrix DecodeMatrix(std::vector<std::uint8_t> bytes) {
  ByteReader r(std::move(bytes), ErrorCode::kTruncatedFile);
  auto c = detail::DecodeMatrixBody(r);
  if (!r.done()) throw Error(ErrorCode::kInvalidInput, "trailing bytes after matrix");
  return c;
}

inline void WriteMatrix(const std::string& path, const CostMatrix& c) {
  ByteWriter w;
  detail::EncodeMatrixBody(w, c);
  w.WriteFile(path);
}

inline CostMatrix ReadMatrix(const std::string& path) {
  auto r = ByteReader::FromFile(path, ErrorCode::kTruncatedFile);
  auto c = detail::DecodeMatrixBody(r);
  if (!r.done()) throw Error(ErrorCode::kInvalidInput, "trailing bytes after matrix: " + path);
  return c;
}

// Comma-separated square matrix, one row per line, no header.
inline CostMatrix ParseCsvMatrix(std::string_view text) {
  std::vector<double> vals;
  std::size_t rows = 0, cols = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    if (line.empty()) continue;
    std::size_t count = 0;
    while (true) {
      const std::size_t comma = line.find(',');
      std::string_view cell = line.substr(0, comma);
      while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front()))) cell.remove_prefix(1);
      while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.remove_suffix(1);
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw Error(ErrorCode::kInvalidInput, "line " + std::to_string(line_no) +
                                                  ": cannot parse '" + std::string(cell) + "'");
      }
      vals.push_back(x);
      ++count;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (rows == 0) cols = count;
    if (count != cols) {
      throw Error(ErrorCode::kShapeMismatch, "line " + std::to_string(line_no) + " has " +
                                                 std::to_string(count) + " cells, expected " +
                                                 std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::kInvalidInput, "empty CSV");
  if (rows != cols) {
    throw Error(ErrorCode::kShapeMismatch, "CSV matrix is " + std::to_string(rows) + "x" +
                                               std::to_string(cols) + ", expected square");
  }
  return CostMatrix(rows, std::move(vals));
}

inline CostMatrix ReadCsvMatrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCsvMatrix(ss.str());
}

// Row-major named matrix stored next to the labeled records (regression
// weights, median vectors).
struct NamedTensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

struct Dataset {
  std::vector<LabeledInstance> instances;
  std::map<std::string, NamedTensor> tensors;
};

inline std::vector<std::uint8_t> EncodeDataset(const Dataset& d) {
  ByteWriter w;
  w.Bytes(kDatasetMagic);
  w.U8(kFormatVersion);
  w.U32(static_cast<std::uint32_t>(d.instances.size()));
  for (const auto& inst : d.instances) {
    detail::EncodeMatrixBody(w, inst.c);
    const std::size_t n = inst.c.size();
    if (inst.u_star.size() != n || inst.v_star.size() != n || inst.optimal_cols.size() != n) {
      throw Error(ErrorCode::kShapeMismatch, "labeled instance has inconsistent sizes");
    }
    w.U32(static_cast<std::uint32_t>(n));
    for (double x : inst.u_star) w.F64(x);
    for (double x : inst.v_star) w.F64(x);
    for (int j : inst.optimal_cols) w.U32(static_cast<std::uint32_t>(j));
  }
  w.U32(static_cast<std::uint32_t>(d.tensors.size()));
  for (const auto& [name, t] : d.tensors) {
    if (t.values.size() != t.rows * t.cols) {
      throw Error(ErrorCode::kShapeMismatch, "tensor '" + name + "' has inconsistent size");
    }
    w.String(name);
    w.U32(static_cast<std::uint32_t>(t.rows));
    w.U32(static_cast<std::uint32_t>(t.cols));
    for (double x : t.values) w.F64(x);
  }
  return w.bytes();
}

inline Dataset DecodeDataset(ByteReader r, const PipelineConfig& cfg = {}) {
  detail::ExpectMagic(r, kDatasetMagic);
  detail::ExpectVersion(r);
  Dataset d;
  const std::uint32_t count = r.U32();
  for (std::uint32_t k = 0; k < count; ++k) {
    auto c = detail::DecodeMatrixBody(r);
    const std::uint32_t n = r.U32();
    if (n != c.size()) throw Error(ErrorCode::kShapeMismatch, "label length does not match matrix");
    if (static_cast<std::uint64_t>(n) * 20 > r.remaining()) {
      throw Error(ErrorCode::kTruncatedFile, "labels shorter than declared");
    }
    std::vector<double> u(n), v(n);
    std::vector<int> cols(n);
    for (auto& x : u) x = r.F64();
    for (auto& x : v) x = r.F64();
    for (auto& j : cols) {
      j = static_cast<int>(r.U32());
      if (j < 0 || static_cast<std::uint32_t>(j) >= n) {
        throw Error(ErrorCode::kInvalidInput, "assignment column out of range");
      }
    }
    if (!IsPermutation(cols, n)) throw Error(ErrorCode::kInvalidInput, "stored M* is not a permutation");
    for (double x : u) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "non-finite label");
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "non-finite label");
    }
    auto features = ExtractFeatures(c, cfg);
    d.instances.push_back({std::move(c), std::move(features), std::move(u), std::move(v),
                           std::move(cols)});
  }
  const std::uint32_t tensors = r.U32();
  for (std::uint32_t k = 0; k < tensors; ++k) {
    std::string name = r.String();
    NamedTensor t;
    t.rows = r.U32();
    t.cols = r.U32();
    if (static_cast<std::uint64_t>(t.rows) * t.cols * 8 > r.remaining()) {
      throw Error(ErrorCode::kTruncatedFile, "tensor '" + name + "' truncated");
    }
    t.values.resize(t.rows * t.cols);
    for (auto& x : t.values) x = r.F64();
    d.tensors.emplace(std::move(name), std::move(t));
  }
  if (!r.done()) throw Error(ErrorCode::kInvalidInput, "trailing bytes after dataset");
  return d;
}

inline void WriteDataset(const std::string& path, const Dataset& d) {
  WriteBytes(path, EncodeDataset(d));
}

inline Dataset ReadDataset(const std::string& path, const PipelineConfig& cfg = {}) {
  return DecodeDataset(ByteReader::FromFile(path, ErrorCode::kTruncatedFile), cfg);
}

}  // namespace dualseed

#endif  // DUALSEED_IO_HPP_
