// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "majormark/message.hpp"
#include "majormark/toy_lm.hpp"

namespace majormark {

double bit_accuracy(const Message& truth, const Message& decoded);

/// Rank of `token` in `logits` (0 = best), ties going to the lower id.
std::size_t logit_rank(std::span<const double> logits, TokenId token);

/// Hits and positions for pooling over several texts.
struct HitCount {
  std::size_t hits = 0;
  std::size_t positions = 0;
  double rate() const noexcept {
    return positions == 0 ? 0.0 : static_cast<double>(hits) / positions;
  }
};

HitCount top5_hits(const ToyLanguageModel& model, std::span<const TokenId> text,
                   std::span<const TokenId> prompt);

/// Fraction of generated tokens within the top 5 of the unbiased logits for
/// their context. Throws kInsufficientText if prompt has fewer than two
/// tokens or text is empty.
double top5_hit_rate(std::span<const TokenId> text,
                     std::span<const TokenId> prompt, const ToyModelSpec& spec);

struct AttackResult {
  TokenSeq tokens;
  /// Replaced positions, ascending.
  std::vector<std::size_t> positions;
};

/// Copy-paste attack: floor(fraction * T) positions, drawn uniformly without
/// replacement from a stream seeded by attack_seed, take the filler token at
/// the same position. Length is preserved.
AttackResult copy_paste_attack(std::span<const TokenId> watermarked,
                               std::span<const TokenId> filler,
                               double fraction, std::uint64_t attack_seed);

}  // namespace majormark
