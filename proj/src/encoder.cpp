// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "majormark/errors.hpp"

namespace majormark {

Watermarker::Watermarker(WatermarkParams params, Message message)
    : params_(params), message_(std::move(message)) {
  params_.validate();
  validate_feasible(message_, params_);
  for (std::size_t p = 0; p < params_.r; ++p) majority_.push_back(majority_bit(block_bits(p)));
}

BitView Watermarker::block_bits(std::size_t block) const {
  const std::size_t d = params_.block_length();
  return message_.bits().subspan(block * d, d);
}

std::size_t Watermarker::block_for(EncodeContext ctx) const noexcept {
  return params_.scheme == Scheme::kMajorMark ? 0 : block_index(ctx, params_.r);
}

std::uint64_t Watermarker::seed_for(EncodeContext ctx) const {
  const std::size_t p = block_for(ctx);
  SeedInput in{params_.key, ctx.prev, ctx.prev_prev, majority_[p].lambda, std::nullopt};
  if (params_.scheme == Scheme::kMajorMarkPlus) in.h = majority_[p].h;
  return hash_seed(in);
}

ShardLayout Watermarker::layout_for(EncodeContext ctx) const {
  return partition(permute_vocab(seed_for(ctx), params_.vocab_size), params_.n_shards());
}

namespace {

void check_logits(std::span<const double> logits, std::size_t vocab_size) {
  if (logits.size() != vocab_size) {
    throw Error(ErrorCode::kLengthMismatch,
                "logits: expected " + std::to_string(vocab_size) + " values, got " +
                    std::to_string(logits.size()));
  }
}

void apply_bias(const ShardLayout& layout, BitView bits, Bit lambda, double delta,
                std::span<double> logits) {
  for (std::size_t i = 0; i < layout.n_shards(); ++i) {
    if (bits[i] != lambda) continue;
    for (TokenId token : layout.shard(i)) logits[token] += delta;
  }
}

}  // namespace

std::size_t Watermarker::bias_in_place(EncodeContext ctx, std::span<double> logits) const {
  check_logits(logits, params_.vocab_size);
  const std::size_t p = block_for(ctx);
  apply_bias(layout_for(ctx), block_bits(p), majority_[p].lambda, params_.delta, logits);
  return p;
}

EncodeStep Watermarker::step(EncodeContext ctx, std::span<const double> logits) const {
  check_logits(logits, params_.vocab_size);
  const std::size_t p = block_for(ctx);
  EncodeStep out{LogitVector(logits.begin(), logits.end()), layout_for(ctx), p};
  apply_bias(out.layout, block_bits(p), majority_[p].lambda, params_.delta, out.logits);
  return out;
}

bool Watermarker::is_green(EncodeContext ctx, TokenId token) const {
  const std::size_t p = block_for(ctx);
  const std::size_t shard =
      shard_of_token(seed_for(ctx), params_.vocab_size, params_.n_shards(), token);
  return block_bits(p)[shard] == majority_[p].lambda;
}

EncodeStep encode_step(const WatermarkParams& params, const Message& message,
                       EncodeContext ctx, std::span<const double> logits) {
  return Watermarker(params, message).step(ctx, logits);
}

TokenId sample_softmax(std::span<const double> logits, SplitMix64& rng) {
  if (logits.empty()) throw Error(ErrorCode::kLengthMismatch, "logits: empty vector");
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double l : logits) total += std::exp(l - peak);
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    cumulative += std::exp(logits[i] - peak);
    if (target < cumulative) return static_cast<TokenId>(i);
  }
  // Rounding left target at the very top; fall back to the last token with mass.
  for (std::size_t i = logits.size(); i-- > 0;) {
    if (std::exp(logits[i] - peak) > 0.0) return static_cast<TokenId>(i);
  }
  return static_cast<TokenId>(logits.size() - 1);
}

double Generation::green_fraction() const noexcept {
  if (green.empty()) return 0.0;
  return static_cast<double>(std::accumulate(green.begin(), green.end(), std::size_t{0})) /
         static_cast<double>(green.size());
}

namespace {

void check_finite(std::span<const double> logits) {
  if (!std::all_of(logits.begin(), logits.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kNonFiniteLogits, "model returned non-finite logits");
  }
}

LogitVector fetch_logits(const LogitsProvider& model, std::span<const TokenId> prefix,
                         std::size_t vocab_size) {
  LogitVector logits = model(prefix);
  check_logits(logits, vocab_size);
  check_finite(logits);
  return logits;
}

void check_prompt(std::span<const TokenId> prompt, std::size_t vocab_size) {
  if (prompt.size() < 2) {
    throw Error(ErrorCode::kInsufficientText, "prompt: need at least two tokens of context");
  }
  for (TokenId t : prompt) {
    if (t >= vocab_size) throw Error(ErrorCode::kToken, "prompt: token id out of range");
  }
}

}  // namespace

Generation generate(const LogitsProvider& model, const Watermarker& watermarker,
                    std::span<const TokenId> prompt, std::size_t length,
                    std::uint64_t sampler_seed) {
  const auto& params = watermarker.params();
  check_prompt(prompt, params.vocab_size);
  TokenSeq sequence(prompt.begin(), prompt.end());
  sequence.reserve(prompt.size() + length);
  Generation out;
  out.tokens.reserve(length);
  SplitMix64 rng(sampler_seed);
  for (std::size_t t = 0; t < length; ++t) {
    const EncodeContext ctx{sequence[sequence.size() - 1], sequence[sequence.size() - 2]};
    LogitVector logits = fetch_logits(model, sequence, params.vocab_size);
    const std::size_t p = watermarker.block_for(ctx);
    const ShardLayout layout = watermarker.layout_for(ctx);
    const BitView bits = watermarker.block_bits(p);
    const Bit lambda = watermarker.block_majority(p).lambda;
    apply_bias(layout, bits, lambda, params.delta, logits);
    const TokenId token = sample_softmax(logits, rng);
    const std::size_t shard = layout.shard_of(token);
    out.tokens.push_back(token);
    out.green.push_back(bits[shard] == lambda ? 1 : 0);
    out.blocks.push_back(static_cast<std::uint32_t>(p));
    out.shards.push_back(static_cast<std::uint32_t>(shard));
    sequence.push_back(token);
  }
  return out;
}

Generation generate(const LogitsProvider& model, const WatermarkParams& params,
                    const Message& message, std::span<const TokenId> prompt,
                    std::size_t length, std::uint64_t sampler_seed) {
  return generate(model, Watermarker(params, message), prompt, length, sampler_seed);
}

TokenSeq generate_unwatermarked(const LogitsProvider& model, std::span<const TokenId> prompt,
                                std::size_t length, std::uint64_t sampler_seed) {
  if (prompt.size() < 2) {
    throw Error(ErrorCode::kInsufficientText, "prompt: need at least two tokens of context");
  }
  TokenSeq sequence(prompt.begin(), prompt.end());
  SplitMix64 rng(sampler_seed);
  std::size_t vocab_size = 0;
  for (std::size_t t = 0; t < length; ++t) {
    const LogitVector logits = model(sequence);
    if (t == 0) vocab_size = logits.size();
    check_logits(logits, vocab_size);
    check_finite(logits);
    sequence.push_back(sample_softmax(logits, rng));
  }
  return TokenSeq(sequence.begin() + static_cast<std::ptrdiff_t>(prompt.size()), sequence.end());
}

}  // namespace majormark
