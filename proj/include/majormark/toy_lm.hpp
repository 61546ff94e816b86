// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "majormark/encoder.hpp"
#include "majormark/params.hpp"

namespace majormark {

struct ToyModelSpec {
  std::size_t vocab_size = kDefaultVocabSize;
  std::uint64_t model_seed = 0x5eed;
  double concentration = 2.0;

  void validate() const;
};

/// Seeded second-order synthetic language model. Logits for a context
/// (x_{t-1}, x_{t-2}) are concentration * z_v, with z_v standard normal
/// draws (Box-Muller) from a splitmix64 stream keyed by
/// (model_seed, x_{t-1}, x_{t-2}).
class ToyLanguageModel {
 public:
  explicit ToyLanguageModel(ToyModelSpec spec);

  const ToyModelSpec& spec() const noexcept { return spec_; }
  std::size_t vocab_size() const noexcept { return spec_.vocab_size; }

  LogitVector logits(TokenId prev, TokenId prev_prev) const;
  void logits_into(TokenId prev, TokenId prev_prev, std::span<double> out) const;

  /// Uses the last two tokens of the prefix (needs at least two).
  LogitVector operator()(std::span<const TokenId> prefix) const;

  LogitsProvider provider() const;

 private:
  ToyModelSpec spec_;
};

/// Natural-log softmax of one entry.
double log_softmax_at(std::span<const double> logits, TokenId token);

/// exp(mean negative log-likelihood) of `text` under the unbiased toy model,
/// each token scored in its true context (prompt supplies the first two).
double surrogate_perplexity(const ToyModelSpec& spec,
                            std::span<const TokenId> text,
                            std::span<const TokenId> prompt);

/// Sum of negative log-likelihoods and the token count, for pooling
/// perplexity over several texts.
struct NllSum {
  double total = 0.0;
  std::size_t tokens = 0;
};
NllSum negative_log_likelihood(const ToyLanguageModel& model,
                               std::span<const TokenId> text,
                               std::span<const TokenId> prompt);

}  // namespace majormark
