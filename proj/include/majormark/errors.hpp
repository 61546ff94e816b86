// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace majormark {

enum class ErrorCode {
  kInvalidMessage,
  kInfeasibleMessage,
  kParameter,
  kOverflow,
  kToken,
  kLengthMismatch,
  kInsufficientText,
  kDegenerateClustering,
  kBlockStarvation,
  kNonFiniteLogits,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Validation failures map to CLI exit code 2, decode failures to 3.
  bool is_decode_failure() const noexcept {
    return code_ == ErrorCode::kInsufficientText ||
           code_ == ErrorCode::kDegenerateClustering ||
           code_ == ErrorCode::kBlockStarvation;
  }

 private:
  ErrorCode code_;
};

class InfeasibleMessageError : public Error {
 public:
  explicit InfeasibleMessageError(std::size_t block);
  std::size_t block() const noexcept { return block_; }

 private:
  std::size_t block_;
};

// Carries the tally that failed to split so callers can report it.
class DegenerateClusteringError : public Error {
 public:
  explicit DegenerateClusteringError(std::vector<std::uint64_t> counts);
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
};

class BlockStarvationError : public Error {
 public:
  explicit BlockStarvationError(std::size_t block);
  std::size_t block() const noexcept { return block_; }

 private:
  std::size_t block_;
};

}  // namespace majormark
