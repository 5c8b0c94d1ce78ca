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

// RowDualNet checkpoint files.
//
//   "RDN1"
//   u32 version, u32 feature_dim, u32 hidden_dim, u32 num_blocks, u32 K,
//   u8 activation, u8 pooling, u32 tensor count
//   per tensor: u32 name length, name, u32 rows, u32 cols, rows*cols f64
//
// All integers and floats little-endian; tensors in column-major order.

#ifndef DUALSEED_CHECKPOINT_HPP_
#define DUALSEED_CHECKPOINT_HPP_

#include <optional>
#include <string>

#include "dualseed/binary_io.hpp"
#include "dualseed/error.hpp"
#include "dualseed/rowdualnet.hpp"

namespace dualseed {

inline constexpr std::string_view kCheckpointMagic = "RDN1";

inline ByteWriter EncodeCheckpoint(const ModelParams& p) {
  ByteWriter w;
  w.Bytes(kCheckpointMagic);
  w.U32(p.version);
  w.U32(static_cast<std::uint32_t>(p.config.input_dim));
  w.U32(static_cast<std::uint32_t>(p.config.hidden_dim));
  w.U32(static_cast<std::uint32_t>(p.config.num_blocks));
  w.U32(static_cast<std::uint32_t>(p.config.refine_k));
  w.U8(static_cast<std::uint8_t>(p.config.activation));
  w.U8(static_cast<std::uint8_t>(p.config.pooling));
  auto tensors = p.Tensors();
  w.U32(static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    w.String(t.name);
    w.U32(static_cast<std::uint32_t>(t.rows));
    w.U32(static_cast<std::uint32_t>(t.cols));
    for (double x : t.span()) w.F64(x);
  }
  return w;
}

inline void SaveCheckpoint(const ModelParams& p, const std::string& path) {
  EncodeCheckpoint(p).WriteFile(path);
}

// `expected_feature_dim`, when given, must match the stored input dimension
// (a model trained on a different feature mode is rejected).
inline ModelParams DecodeCheckpoint(ByteReader r,
                                    std::optional<int> expected_feature_dim = {}) {
  if (r.Bytes(kCheckpointMagic.size()) != kCheckpointMagic) {
    throw Error(ErrorCode::kCorruptCheckpoint, "bad checkpoint magic");
  }
  const std::uint32_t version = r.U32();
  if (version != kModelVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint version " + std::to_string(version) + ", expected " +
                    std::to_string(kModelVersion));
  }
  ModelConfig cfg;
  cfg.input_dim = static_cast<int>(r.U32());
  cfg.hidden_dim = static_cast<int>(r.U32());
  cfg.num_blocks = static_cast<int>(r.U32());
  cfg.refine_k = static_cast<int>(r.U32());
  const std::uint8_t act = r.U8();
  const std::uint8_t pool = r.U8();
  if (act != static_cast<std::uint8_t>(Activation::kRelu) || pool > 2) {
    throw Error(ErrorCode::kCorruptCheckpoint, "unknown activation or pooling tag");
  }
  cfg.activation = static_cast<Activation>(act);
  cfg.pooling = static_cast<RefinePooling>(pool);
  if (expected_feature_dim && *expected_feature_dim != cfg.input_dim) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint feature dim " + std::to_string(cfg.input_dim) +
                    " does not match pipeline feature dim " +
                    std::to_string(*expected_feature_dim));
  }
  constexpr int kMaxDim = 1 << 16;
  if (cfg.input_dim < 1 || cfg.input_dim > kMaxDim || cfg.hidden_dim < 1 ||
      cfg.hidden_dim > kMaxDim || cfg.num_blocks > 1024 || cfg.refine_k < 1 ||
      cfg.refine_k > kMaxDim) {
    throw Error(ErrorCode::kCorruptCheckpoint, "implausible checkpoint header");
  }
  ModelParams p = ModelParams::Zeros(cfg);
  auto tensors = p.Tensors();
  if (r.U32() != tensors.size()) {
    throw Error(ErrorCode::kCorruptCheckpoint, "tensor count does not match header");
  }
  for (auto& t : tensors) {
    const std::string name = r.String();
    const std::uint32_t rows = r.U32();
    const std::uint32_t cols = r.U32();
    if (name != t.name || rows != t.rows || cols != t.cols) {
      throw Error(ErrorCode::kCorruptCheckpoint, "unexpected tensor '" + name + "'");
    }
    for (double& x : t.span()) x = r.F64();
  }
  if (!r.done()) throw Error(ErrorCode::kCorruptCheckpoint, "trailing bytes in checkpoint");
  if (!p.AllFinite()) throw Error(ErrorCode::kCorruptCheckpoint, "non-finite parameter");
  return p;
}

inline ModelParams LoadCheckpoint(const std::string& path,
                                  std::optional<int> expected_feature_dim = {}) {
  return DecodeCheckpoint(ByteReader::FromFile(path, ErrorCode::kCorruptCheckpoint),
                          expected_feature_dim);
}

}  // namespace dualseed

#endif  // DUALSEED_CHECKPOINT_HPP_
