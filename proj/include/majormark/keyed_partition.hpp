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

struct SeedInput {
  std::uint64_t key = kDefaultKey;
  TokenId prev = 0;       // x_{t-1}
  TokenId prev_prev = 0;  // x_{t-2}
  Bit lambda = 1;
  std::optional<std::uint32_t> h;  // present for MajorMark+ only
};

/// (k * x_{t-1} * x_{t-2} + lambda * 31 [+ h * 97]) mod 2^64.
///
/// Token id 0 annihilates the product term, collapsing the seed to
/// lambda * 31 [+ h * 97]. The decoder reconstructs the same value, so this
/// costs diversity but not correctness.
constexpr std::uint64_t hash_seed(const SeedInput& in) noexcept {
  std::uint64_t s = in.key * std::uint64_t{in.prev} * std::uint64_t{in.prev_prev};
  s += std::uint64_t{in.lambda} * 31u;
  if (in.h) s += std::uint64_t{*in.h} * 97u;
  return s;
}

/// Fisher-Yates shuffle of [0, vocab_size) driven by a splitmix64 stream
/// seeded with `seed`. Iterates i = n-1 .. 1, swapping i with a uniform
/// j in [0, i].
std::vector<TokenId> permute_vocab(std::uint64_t seed, std::size_t vocab_size);

/// Shard index of a position in the permuted vocabulary. The first
/// (vocab_size mod n_shards) shards hold one extra token.
std::size_t shard_of_position(std::size_t vocab_size, std::size_t n_shards,
                              std::size_t position) noexcept;

/// Computes the shard a single token lands in under `seed` without
/// materialising the permutation: it replays the same shuffle and follows
/// only that token's position. Agrees with partition(permute_vocab(...)).
std::size_t shard_of_token(std::uint64_t seed, std::size_t vocab_size,
                           std::size_t n_shards, TokenId token);

class ShardLayout {
 public:
  ShardLayout(std::vector<TokenId> permutation, std::size_t n_shards);

  std::size_t vocab_size() const noexcept { return permutation_.size(); }
  std::size_t n_shards() const noexcept { return boundaries_.size() - 1; }
  std::span<const TokenId> permutation() const noexcept { return permutation_; }
  std::span<const std::size_t> boundaries() const noexcept { return boundaries_; }

  std::span<const TokenId> shard(std::size_t i) const;
  std::size_t shard_size(std::size_t i) const;
  std::size_t position_of(TokenId token) const;

  /// Inverse permutation followed by a binary search over the boundaries.
  std::size_t shard_of(TokenId token) const;

 private:
  std::vector<TokenId> permutation_;
  std::vector<TokenId> inverse_;
  std::vector<std::size_t> boundaries_;
};

/// Contiguous balanced slices of the permutation. Throws kParameter when
/// n_shards is zero or exceeds the vocabulary.
ShardLayout partition(std::vector<TokenId> permutation, std::size_t n_shards);

/// Green list as a predicate: token is green iff block_bits[shard] == lambda.
/// Holds references into the layout and bits; both must outlive it.
class GreenList {
 public:
  GreenList(const ShardLayout& layout, BitView block_bits, Bit lambda);

  bool contains(TokenId token) const;
  bool shard_is_green(std::size_t shard) const { return bits_[shard] == lambda_; }
  std::size_t size() const noexcept;
  double ratio() const noexcept;

 private:
  const ShardLayout* layout_;
  BitView bits_;
  Bit lambda_;
};

GreenList green_list(const ShardLayout& layout, BitView block_bits, Bit lambda);

}  // namespace majormark
