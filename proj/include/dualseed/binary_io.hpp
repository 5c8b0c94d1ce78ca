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

// Little-endian byte encoding shared by the on-disk formats.

#ifndef DUALSEED_BINARY_IO_HPP_
#define DUALSEED_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "dualseed/error.hpp"

namespace dualseed {

inline void WriteBytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

class ByteWriter {
 public:
  void U8(std::uint8_t x) { bytes_.push_back(x); }
  void U32(std::uint32_t x) { Le(x); }
  void U64(std::uint64_t x) { Le(x); }
  void F64(double x) { Le(std::bit_cast<std::uint64_t>(x)); }
  void Bytes(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  void String(std::string_view s) {
    U32(static_cast<std::uint32_t>(s.size()));
    Bytes(s);
  }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  void WriteFile(const std::string& path) const { WriteBytes(path, bytes_); }

 private:
  template <typename T>
  void Le(T x) {
    for (std::size_t k = 0; k < sizeof(T); ++k) {
      bytes_.push_back(static_cast<std::uint8_t>(x >> (8 * k)));
    }
  }
  std::vector<std::uint8_t> bytes_;
};

// Reads from an in-memory buffer; running off the end throws `truncated`.
class ByteReader {
 public:
  ByteReader(std::vector<std::uint8_t> bytes, ErrorCode truncated)
      : bytes_(std::move(bytes)), truncated_(truncated) {}

  static ByteReader FromFile(const std::string& path, ErrorCode truncated) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return ByteReader(std::move(bytes), truncated);
  }

  std::uint8_t U8() {
    Need(1);
    return bytes_[pos_++];
  }
  std::uint32_t U32() { return Le<std::uint32_t>(); }
  std::uint64_t U64() { return Le<std::uint64_t>(); }
  double F64() { return std::bit_cast<double>(Le<std::uint64_t>()); }
  std::string Bytes(std::size_t count) {
    Need(count);
    std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + count));
    pos_ += count;
    return s;
  }
  std::string String() { return Bytes(U32()); }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t count) const {
    if (count > bytes_.size() - pos_) {
      throw Error(truncated_, "unexpected end of data at byte " + std::to_string(pos_));
    }
  }
  template <typename T>
  T Le() {
    Need(sizeof(T));
    T x = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) {
      x |= static_cast<T>(bytes_[pos_ + k]) << (8 * k);
    }
    pos_ += sizeof(T);
    return x;
  }

  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  ErrorCode truncated_;
};

}  // namespace dualseed

#endif  // DUALSEED_BINARY_IO_HPP_
