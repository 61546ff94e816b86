// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/keyed_partition.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "majormark/errors.hpp"
#include "majormark/splitmix.hpp"

namespace majormark {

std::vector<TokenId> permute_vocab(std::uint64_t seed, std::size_t vocab_size) {
  if (vocab_size == 0) throw Error(ErrorCode::kParameter, "vocab_size: must be positive");
  std::vector<TokenId> perm(vocab_size);
  std::iota(perm.begin(), perm.end(), TokenId{0});
  SplitMix64 rng(seed);
  for (std::size_t i = vocab_size - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

std::size_t shard_of_position(std::size_t vocab_size, std::size_t n_shards,
                              std::size_t position) noexcept {
  const std::size_t base = vocab_size / n_shards;
  const std::size_t extra = vocab_size % n_shards;
  const std::size_t wide_span = extra * (base + 1);
  if (position < wide_span) return position / (base + 1);
  return extra + (position - wide_span) / base;
}

std::size_t shard_of_token(std::uint64_t seed, std::size_t vocab_size,
                           std::size_t n_shards, TokenId token) {
  if (token >= vocab_size) throw Error(ErrorCode::kToken, "token id out of vocabulary range");
  // Replays permute_vocab's swaps, tracking where `token` sits.
  std::size_t pos = token;
  SplitMix64 rng(seed);
  for (std::size_t i = vocab_size - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    if (pos == i) {
      pos = j;
    } else if (pos == j) {
      pos = i;
    }
  }
  return shard_of_position(vocab_size, n_shards, pos);
}

ShardLayout::ShardLayout(std::vector<TokenId> permutation, std::size_t n_shards)
    : permutation_(std::move(permutation)) {
  const std::size_t n = permutation_.size();
  if (n_shards == 0 || n_shards > n) {
    throw Error(ErrorCode::kParameter,
                "n_shards: must be in [1, vocab_size] (got " + std::to_string(n_shards) + ")");
  }
  inverse_.assign(n, static_cast<TokenId>(n));
  for (std::size_t pos = 0; pos < n; ++pos) {
    const TokenId token = permutation_[pos];
    if (token >= n || inverse_[token] != n) {
      throw Error(ErrorCode::kParameter, "permutation: not a bijection over [0, vocab_size)");
    }
    inverse_[token] = static_cast<TokenId>(pos);
  }
  const std::size_t base = n / n_shards;
  const std::size_t extra = n % n_shards;
  boundaries_.resize(n_shards + 1);
  boundaries_[0] = 0;
  for (std::size_t i = 0; i < n_shards; ++i) {
    boundaries_[i + 1] = boundaries_[i] + base + (i < extra ? 1 : 0);
  }
}

std::span<const TokenId> ShardLayout::shard(std::size_t i) const {
  if (i >= n_shards()) throw Error(ErrorCode::kParameter, "shard index out of range");
  return std::span<const TokenId>(permutation_).subspan(boundaries_[i],
                                                        boundaries_[i + 1] - boundaries_[i]);
}

std::size_t ShardLayout::shard_size(std::size_t i) const { return shard(i).size(); }

std::size_t ShardLayout::position_of(TokenId token) const {
  if (token >= vocab_size()) throw Error(ErrorCode::kToken, "token id out of vocabulary range");
  return inverse_[token];
}

std::size_t ShardLayout::shard_of(TokenId token) const {
  const std::size_t pos = position_of(token);
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), pos);
  return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

ShardLayout partition(std::vector<TokenId> permutation, std::size_t n_shards) {
  return ShardLayout(std::move(permutation), n_shards);
}

GreenList::GreenList(const ShardLayout& layout, BitView block_bits, Bit lambda)
    : layout_(&layout), bits_(block_bits), lambda_(lambda) {
  if (block_bits.size() != layout.n_shards()) {
    throw Error(ErrorCode::kParameter,
                "block bits: length must equal the number of shards");
  }
}

bool GreenList::contains(TokenId token) const {
  return shard_is_green(layout_->shard_of(token));
}

std::size_t GreenList::size() const noexcept {
  std::size_t total = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] == lambda_) total += layout_->boundaries()[i + 1] - layout_->boundaries()[i];
  }
  return total;
}

double GreenList::ratio() const noexcept {
  return static_cast<double>(size()) / static_cast<double>(layout_->vocab_size());
}

GreenList green_list(const ShardLayout& layout, BitView block_bits, Bit lambda) {
  return GreenList(layout, block_bits, lambda);
}

}  // namespace majormark
