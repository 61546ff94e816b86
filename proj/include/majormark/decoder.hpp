// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "majormark/message.hpp"
#include "majormark/params.hpp"

namespace majormark {

struct Hypothesis {
  Bit lambda = 1;
  std::optional<std::uint32_t> h;  // MajorMark+ only
  std::size_t block = 0;           // MajorMark+ only
};

/// A token stream is decoded as one or more independently generated
/// segments. Each segment drops its own first two tokens, whose hash
/// context lives in the unseen prompt.
using Segments = std::span<const TokenSeq>;

/// Shard-wise occurrence counts of the tokens at positions 3..T of every
/// segment, under the layouts a hypothesis implies. For MajorMark+ only
/// tokens routed to hypothesis.block are counted.
///
/// Throws kInsufficientText when no segment has three or more tokens.
std::vector<std::uint64_t> tally(Segments segments,
                                 const WatermarkParams& params,
                                 const Hypothesis& hypothesis);

/// Population standard deviation.
double population_std(std::span<const std::uint64_t> counts);

/// Inclusive majority-count range a block of length d admits for lambda:
/// lambda = 1 -> [ceil(d/2), d-1], lambda = 0 -> [floor(d/2)+1, d-1].
/// Empty (first > last) when no feasible block has that majority bit.
struct CountRange {
  std::uint32_t first = 0;
  std::uint32_t last = 0;
  std::size_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
};
CountRange majority_count_range(std::size_t d, Bit lambda) noexcept;

/// Number of hypotheses MajorMark+ tallies: r * (b/r - 1) = b - r.
std::size_t decoding_config_count(std::size_t b, std::size_t r);

struct BlockDecode {
  Bit lambda = 1;
  std::uint32_t h = 0;
  double best_std = 0.0;
  double runner_up_std = 0.0;
  /// Shard counts under the winning hypothesis.
  std::vector<std::uint64_t> counts;
};

struct DecodeResult {
  Message message;
  std::vector<BlockDecode> blocks;
  /// Tally passes over the text (2 for MajorMark, b - r for MajorMark+).
  std::size_t passes = 0;
};

/// Clustering-based decoding: tally under lambda' in {0, 1}, keep the more
/// skewed tally (ties -> 1), split its shards with kmeans2.
/// Throws DegenerateClusteringError if the chosen tally is flat.
DecodeResult decode_majormark(Segments segments, const WatermarkParams& params);

/// Deterministic decoding: per block, the (lambda', h') hypothesis with the
/// largest tally standard deviation wins; the h shards with the highest
/// counts take lambda (ties to the lower shard index).
/// Throws BlockStarvationError if a block receives no tokens.
DecodeResult decode_plus(Segments segments, const WatermarkParams& params);

/// Dispatches on params.scheme.
DecodeResult decode(Segments segments, const WatermarkParams& params);
DecodeResult decode(const TokenSeq& text, const WatermarkParams& params);

}  // namespace majormark
