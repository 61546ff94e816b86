// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "majormark/keyed_partition.hpp"
#include "majormark/message.hpp"
#include "majormark/params.hpp"
#include "majormark/splitmix.hpp"

namespace majormark {

using LogitVector = std::vector<double>;

/// Any next-token model: full prefix (prompt + generated) -> logits.
using LogitsProvider = std::function<LogitVector(std::span<const TokenId>)>;

struct EncodeContext {
  TokenId prev = 0;       // x_{t-1}
  TokenId prev_prev = 0;  // x_{t-2}
};

/// MajorMark+ block routing: (x_{t-1} + x_{t-2}) mod r.
constexpr std::size_t block_index(EncodeContext ctx, std::size_t r) noexcept {
  return static_cast<std::size_t>(
      (std::uint64_t{ctx.prev} + std::uint64_t{ctx.prev_prev}) % r);
}

struct EncodeStep {
  LogitVector logits;
  ShardLayout layout;
  std::size_t block = 0;
};

/// Bound (params, message) pair. Validates once and caches per-block
/// majority info so each generation step only hashes, shuffles and biases.
class Watermarker {
 public:
  Watermarker(WatermarkParams params, Message message);

  const WatermarkParams& params() const noexcept { return params_; }
  const Message& message() const noexcept { return message_; }
  const MajorityInfo& block_majority(std::size_t block) const {
    return majority_.at(block);
  }

  std::uint64_t seed_for(EncodeContext ctx) const;
  std::size_t block_for(EncodeContext ctx) const noexcept;
  BitView block_bits(std::size_t block) const;

  ShardLayout layout_for(EncodeContext ctx) const;

  /// Adds delta to the green logits in place. Red logits are not touched.
  /// Returns the selected block.
  std::size_t bias_in_place(EncodeContext ctx, std::span<double> logits) const;

  EncodeStep step(EncodeContext ctx, std::span<const double> logits) const;

  /// Whether `token` was green at a step with context `ctx`.
  bool is_green(EncodeContext ctx, TokenId token) const;

 private:
  WatermarkParams params_;
  Message message_;
  std::vector<BitView> blocks_;
  std::vector<MajorityInfo> majority_;
};

EncodeStep encode_step(const WatermarkParams& params, const Message& message,
                       EncodeContext ctx, std::span<const double> logits);

/// Samples from softmax(logits) (temperature 1) with one uniform draw.
TokenId sample_softmax(std::span<const double> logits, SplitMix64& rng);

struct Generation {
  TokenSeq tokens;
  /// Per generated position: was the token green under the step's layout.
  std::vector<std::uint8_t> green;
  /// Per generated position: the block the step was routed to.
  std::vector<std::uint32_t> blocks;
  /// Per generated position: the token's shard in the step's layout.
  std::vector<std::uint32_t> shards;

  double green_fraction() const noexcept;
};

/// Watermarked autoregressive generation of `length` tokens after `prompt`
/// (prompt needs >= 2 tokens so the first step has a hash context).
Generation generate(const LogitsProvider& model, const Watermarker& watermarker,
                    std::span<const TokenId> prompt, std::size_t length,
                    std::uint64_t sampler_seed);

Generation generate(const LogitsProvider& model, const WatermarkParams& params,
                    const Message& message, std::span<const TokenId> prompt,
                    std::size_t length, std::uint64_t sampler_seed);

/// The same loop with no watermark. For identical seeds this matches a
/// delta = 0 watermarked run token for token.
TokenSeq generate_unwatermarked(const LogitsProvider& model,
                                std::span<const TokenId> prompt,
                                std::size_t length, std::uint64_t sampler_seed);

}  // namespace majormark
