// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/errors.hpp"

#include <utility>

namespace majormark {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidMessage: return "invalid-message";
    case ErrorCode::kInfeasibleMessage: return "infeasible-message";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kOverflow: return "overflow";
    case ErrorCode::kToken: return "token";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kInsufficientText: return "insufficient-text";
    case ErrorCode::kDegenerateClustering: return "degenerate-clustering";
    case ErrorCode::kBlockStarvation: return "block-starvation";
    case ErrorCode::kNonFiniteLogits: return "non-finite-logits";
  }
  return "unknown";
}

InfeasibleMessageError::InfeasibleMessageError(std::size_t block)
    : Error(ErrorCode::kInfeasibleMessage,
            "infeasible message: block " + std::to_string(block) +
                " is all zeros or all ones"),
      block_(block) {}

DegenerateClusteringError::DegenerateClusteringError(
    std::vector<std::uint64_t> counts)
    : Error(ErrorCode::kDegenerateClustering,
            "degenerate clustering: all shard counts are equal"),
      counts_(std::move(counts)) {}

BlockStarvationError::BlockStarvationError(std::size_t block)
    : Error(ErrorCode::kBlockStarvation,
            "block " + std::to_string(block) + " received no tallied tokens"),
      block_(block) {}

}  // namespace majormark
