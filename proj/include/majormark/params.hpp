// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace majormark {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;

inline constexpr std::uint64_t kDefaultKey = 15485863;
inline constexpr std::size_t kDefaultVocabSize = 1024;

enum class Scheme { kMajorMark, kMajorMarkPlus };

std::string_view to_string(Scheme scheme) noexcept;
/// Accepts the CLI spellings "majormark" and "plus".
std::optional<Scheme> parse_scheme(std::string_view name) noexcept;

struct WatermarkParams {
  Scheme scheme = Scheme::kMajorMark;
  std::uint64_t key = kDefaultKey;
  std::size_t b = 8;
  std::size_t r = 1;
  double delta = 2.0;
  std::size_t vocab_size = kDefaultVocabSize;

  /// Throws Error(kParameter) naming the offending field.
  void validate() const;

  std::size_t block_length() const noexcept { return b / r; }
  std::size_t n_shards() const noexcept { return b / r; }
};

}  // namespace majormark
