// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "majormark/errors.hpp"
#include "majormark/splitmix.hpp"

namespace majormark {

double bit_accuracy(const Message& truth, const Message& decoded) {
  if (truth.size() != decoded.size()) {
    throw Error(ErrorCode::kLengthMismatch, "bit_accuracy: messages differ in length");
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) same += truth[i] == decoded[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(truth.size());
}

std::size_t logit_rank(std::span<const double> logits, TokenId token) {
  if (token >= logits.size()) throw Error(ErrorCode::kToken, "token id out of vocabulary range");
  const double value = logits[token];
  std::size_t ahead = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (logits[i] > value || (logits[i] == value && i < token)) ++ahead;
  }
  return ahead;
}

HitCount top5_hits(const ToyLanguageModel& model, std::span<const TokenId> text,
                   std::span<const TokenId> prompt) {
  if (prompt.size() < 2) {
    throw Error(ErrorCode::kInsufficientText, "prompt: need at least two tokens of context");
  }
  HitCount out;
  LogitVector logits(model.vocab_size());
  TokenId prev = prompt[prompt.size() - 1];
  TokenId prev_prev = prompt[prompt.size() - 2];
  for (TokenId token : text) {
    model.logits_into(prev, prev_prev, logits);
    out.hits += logit_rank(logits, token) < 5 ? 1 : 0;
    ++out.positions;
    prev_prev = prev;
    prev = token;
  }
  return out;
}

double top5_hit_rate(std::span<const TokenId> text, std::span<const TokenId> prompt,
                     const ToyModelSpec& spec) {
  if (text.empty()) throw Error(ErrorCode::kInsufficientText, "text: no positions to score");
  return top5_hits(ToyLanguageModel(spec), text, prompt).rate();
}

AttackResult copy_paste_attack(std::span<const TokenId> watermarked,
                               std::span<const TokenId> filler, double fraction,
                               std::uint64_t attack_seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kParameter, "fraction: must lie in [0, 1)");
  }
  if (filler.size() < watermarked.size()) {
    throw Error(ErrorCode::kLengthMismatch, "filler: shorter than the watermarked text");
  }
  const std::size_t n = watermarked.size();
  // The epsilon keeps products like 0.1 * 500 from flooring to 49.
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));

  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  SplitMix64 rng(attack_seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(index[i], index[j]);
  }
  AttackResult out{TokenSeq(watermarked.begin(), watermarked.end()),
                   std::vector<std::size_t>(index.begin(), index.begin() + static_cast<std::ptrdiff_t>(k))};
  std::sort(out.positions.begin(), out.positions.end());
  for (std::size_t pos : out.positions) out.tokens[pos] = filler[pos];
  return out;
}

}  // namespace majormark
