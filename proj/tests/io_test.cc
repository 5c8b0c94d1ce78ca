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

#include "dualseed/io.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <filesystem>
#include <fstream>
#include <vector>

#include "dualseed/datagen.hpp"

namespace dualseed {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ErrorCode CodeOf(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidInput;
}

TEST(MatrixFileTest, RoundTripBitExact) {
  auto c = GenDense(17, 3);
  const auto path = TempPath("dualseed_io_matrix.lapm");
  WriteMatrix(path, c);
  auto back = ReadMatrix(path);
  ASSERT_EQ(back.size(), 17u);
  for (std::size_t k = 0; k < c.values().size(); ++k) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.values()[k]),
              std::bit_cast<std::uint64_t>(c.values()[k]));
  }
  EXPECT_FALSE(back.sentinel().has_value());
  std::filesystem::remove(path);
}

TEST(MatrixFileTest, SentinelPreserved) {
  auto s = Sparsify(GenDense(12, 1), 0.5, 2);
  auto back = DecodeMatrix(EncodeMatrix(s));
  EXPECT_EQ(back, s);
  ASSERT_TRUE(back.sentinel().has_value());
  EXPECT_EQ(*back.sentinel(), *s.sentinel());
}

TEST(MatrixFileTest, LayoutIsLittleEndian) {
  auto bytes = EncodeMatrix(CostMatrix::FromRows({{1.0}}));
  ASSERT_EQ(bytes.size(), 4u + 1 + 4 + 1 + 8 + 8);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "LAPM");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 1);
  EXPECT_EQ(bytes[6], 0);
  EXPECT_EQ(bytes[9], 0);
  // 1.0 = 0x3FF0000000000000, most significant byte last.
  EXPECT_EQ(bytes[25], 0x3F);
  EXPECT_EQ(bytes[24], 0xF0);
}

TEST(MatrixFileTest, Errors) {
  auto bytes = EncodeMatrix(GenDense(4, 1));
  auto bad = bytes;
  bad[1] = 'X';
  EXPECT_EQ(CodeOf([&] { DecodeMatrix(bad); }), ErrorCode::kBadMagic);
  auto cut = std::vector<std::uint8_t>(bytes.begin(), bytes.end() - 3);
  EXPECT_EQ(CodeOf([&] { DecodeMatrix(cut); }), ErrorCode::kTruncatedFile);
  auto header_only = std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 7);
  EXPECT_EQ(CodeOf([&] { DecodeMatrix(header_only); }), ErrorCode::kTruncatedFile);
  auto nan = bytes;
  for (int k = 0; k < 8; ++k) nan[18 + k] = 0xFF;
  EXPECT_EQ(CodeOf([&] { DecodeMatrix(nan); }), ErrorCode::kNonFinite);
}

TEST(CsvTest, IntegerMatrix) {
  auto c = ParseCsvMatrix("4,1,3\n2,0,5\n3,2,2\n");
  EXPECT_EQ(c, CostMatrix::FromRows({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}}));
  EXPECT_EQ(SolveCold(c).assignment.total_cost, 5.0);
}

TEST(CsvTest, DecimalsAndWhitespace) {
  auto c = ParseCsvMatrix(" 0.5, 1e-3\r\n-2 ,+7.25\n\n");
  EXPECT_EQ(c, CostMatrix::FromRows({{0.5, 1e-3}, {-2, 7.25}}));
}

TEST(CsvTest, Errors) {
  EXPECT_EQ(CodeOf([] { ParseCsvMatrix("1,nan\n2,3\n"); }), ErrorCode::kNonFinite);
  EXPECT_EQ(CodeOf([] { ParseCsvMatrix("1,2\n3\n"); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(CodeOf([] { ParseCsvMatrix("1,2,3\n4,5,6\n"); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(CodeOf([] { ParseCsvMatrix("1,x\n2,3\n"); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(CodeOf([] { ParseCsvMatrix(""); }), ErrorCode::kInvalidInput);
}

TEST(CsvTest, ReadFromFile) {
  const auto path = TempPath("dualseed_io.csv");
  {
    std::ofstream out(path);
    out << "1,2\n2,1\n";
  }
  EXPECT_EQ(ReadCsvMatrix(path), CostMatrix::FromRows({{1, 2}, {2, 1}}));
  std::filesystem::remove(path);
}

TEST(DatasetFileTest, RoundTrip) {
  Dataset d;
  for (std::uint64_t s = 0; s < 3; ++s) d.instances.push_back(GenLabels(GenDense(9 + s, s)));
  d.tensors["linreg.weights"] = NamedTensor{1, 3, {0.5, -1.0, 2.0}};
  const auto path = TempPath("dualseed_io.lapd");
  WriteDataset(path, d);
  auto back = ReadDataset(path);
  ASSERT_EQ(back.instances.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back.instances[k].c, d.instances[k].c);
    EXPECT_EQ(back.instances[k].u_star, d.instances[k].u_star);
    EXPECT_EQ(back.instances[k].v_star, d.instances[k].v_star);
    EXPECT_EQ(back.instances[k].optimal_cols, d.instances[k].optimal_cols);
    EXPECT_EQ(back.instances[k].features, d.instances[k].features);
  }
  EXPECT_EQ(back.tensors, d.tensors);
  std::filesystem::remove(path);
}

TEST(DatasetFileTest, Errors) {
  Dataset d;
  d.instances.push_back(GenLabels(GenDense(5, 1)));
  auto bytes = EncodeDataset(d);
  auto bad = bytes;
  bad[0] = 'Z';
  EXPECT_EQ(CodeOf([&] { DecodeDataset(ByteReader(bad, ErrorCode::kTruncatedFile)); }),
            ErrorCode::kBadMagic);
  for (std::size_t cut : {std::size_t{5}, std::size_t{40}, bytes.size() - 1}) {
    std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
    EXPECT_EQ(CodeOf([&] { DecodeDataset(ByteReader(part, ErrorCode::kTruncatedFile)); }),
              ErrorCode::kTruncatedFile);
  }
}

}  // namespace
}  // namespace dualseed
