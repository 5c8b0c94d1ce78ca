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

#ifndef DUALSEED_ERROR_HPP_
#define DUALSEED_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dualseed {

enum class ErrorCode {
  kInvalidInput,
  kNonFinite,
  kInfeasibleSeed,
  kTooLarge,
  kShapeMismatch,
  kCorruptCheckpoint,
  kVersionMismatch,
  kEmptyDataset,
  kBadMagic,
  kTruncatedFile,
  kInfeasibleMask,
  kSingularSystem,
  kDimensionMismatch,
  kInsufficientTrials,
  kIo,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kInfeasibleSeed: return "InfeasibleSeed";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kCorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kInfeasibleMask: return "InfeasibleMask";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInsufficientTrials: return "InsufficientTrials";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above so
// callers (and the bench harness) can record it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dualseed

#endif  // DUALSEED_ERROR_HPP_
