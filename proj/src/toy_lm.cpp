// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/toy_lm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "majormark/errors.hpp"
#include "majormark/splitmix.hpp"

namespace majormark {

void ToyModelSpec::validate() const {
  if (vocab_size < 2) throw Error(ErrorCode::kParameter, "vocab_size: toy model needs at least 2 tokens");
  if (!(concentration > 0) || !std::isfinite(concentration)) {
    throw Error(ErrorCode::kParameter, "concentration: must be positive and finite");
  }
}

ToyLanguageModel::ToyLanguageModel(ToyModelSpec spec) : spec_(spec) { spec_.validate(); }

void ToyLanguageModel::logits_into(TokenId prev, TokenId prev_prev, std::span<double> out) const {
  if (prev >= spec_.vocab_size || prev_prev >= spec_.vocab_size) {
    throw Error(ErrorCode::kToken, "context: token id out of vocabulary range");
  }
  if (out.size() != spec_.vocab_size) {
    throw Error(ErrorCode::kLengthMismatch, "logits: output span has the wrong length");
  }
  const std::uint64_t context = (std::uint64_t{prev} << 32) | std::uint64_t{prev_prev};
  SplitMix64 rng(mix64(spec_.model_seed ^ mix64(context)));
  // Box-Muller pairs; u1 is drawn from (0, 1] so the log stays finite.
  const double scale = spec_.concentration;
  for (std::size_t i = 0; i < out.size(); i += 2) {
    const double u1 = static_cast<double>((rng.next() >> 11) + 1) * 0x1.0p-53;
    const double u2 = rng.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i] = scale * radius * std::cos(angle);
    if (i + 1 < out.size()) out[i + 1] = scale * radius * std::sin(angle);
  }
}

LogitVector ToyLanguageModel::logits(TokenId prev, TokenId prev_prev) const {
  LogitVector out(spec_.vocab_size);
  logits_into(prev, prev_prev, out);
  return out;
}

LogitVector ToyLanguageModel::operator()(std::span<const TokenId> prefix) const {
  if (prefix.size() < 2) {
    throw Error(ErrorCode::kInsufficientText, "context: toy model needs two previous tokens");
  }
  return logits(prefix[prefix.size() - 1], prefix[prefix.size() - 2]);
}

LogitsProvider ToyLanguageModel::provider() const {
  return [model = *this](std::span<const TokenId> prefix) { return model(prefix); };
}

double log_softmax_at(std::span<const double> logits, TokenId token) {
  if (token >= logits.size()) throw Error(ErrorCode::kToken, "token id out of vocabulary range");
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double l : logits) total += std::exp(l - peak);
  return logits[token] - peak - std::log(total);
}

NllSum negative_log_likelihood(const ToyLanguageModel& model, std::span<const TokenId> text,
                               std::span<const TokenId> prompt) {
  if (prompt.size() < 2) {
    throw Error(ErrorCode::kInsufficientText, "prompt: need at least two tokens of context");
  }
  NllSum out;
  LogitVector logits(model.vocab_size());
  TokenId prev = prompt[prompt.size() - 1];
  TokenId prev_prev = prompt[prompt.size() - 2];
  for (TokenId token : text) {
    model.logits_into(prev, prev_prev, logits);
    out.total -= log_softmax_at(logits, token);
    ++out.tokens;
    prev_prev = prev;
    prev = token;
  }
  return out;
}

double surrogate_perplexity(const ToyModelSpec& spec, std::span<const TokenId> text,
                            std::span<const TokenId> prompt) {
  if (text.empty()) throw Error(ErrorCode::kInsufficientText, "text: perplexity of an empty text");
  const NllSum nll = negative_log_likelihood(ToyLanguageModel(spec), text, prompt);
  return std::exp(nll.total / static_cast<double>(nll.tokens));
}

}  // namespace majormark
