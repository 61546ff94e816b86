// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "majormark/encoder.hpp"
#include "majormark/errors.hpp"
#include "majormark/keyed_partition.hpp"
#include "majormark/kmeans.hpp"

namespace majormark {

std::vector<std::uint64_t> tally(Segments segments, const WatermarkParams& params,
                                 const Hypothesis& hypothesis) {
  params.validate();
  const bool plus = params.scheme == Scheme::kMajorMarkPlus;
  if (plus && !hypothesis.h) {
    throw Error(ErrorCode::kParameter, "hypothesis: MajorMark+ tallies need a count h");
  }
  if (plus && hypothesis.block >= params.r) {
    throw Error(ErrorCode::kParameter, "hypothesis: block index out of range");
  }
  std::vector<std::uint64_t> counts(params.n_shards(), 0);
  bool any_segment = false;
  for (const TokenSeq& text : segments) {
    for (TokenId t : text) {
      if (t >= params.vocab_size) throw Error(ErrorCode::kToken, "text: token id out of range");
    }
    if (text.size() < 3) continue;
    any_segment = true;
    for (std::size_t t = 2; t < text.size(); ++t) {
      const EncodeContext ctx{text[t - 1], text[t - 2]};
      if (plus && block_index(ctx, params.r) != hypothesis.block) continue;
      SeedInput in{params.key, ctx.prev, ctx.prev_prev, hypothesis.lambda, std::nullopt};
      if (plus) in.h = hypothesis.h;
      ++counts[shard_of_token(hash_seed(in), params.vocab_size, params.n_shards(), text[t])];
    }
  }
  if (!any_segment) {
    throw Error(ErrorCode::kInsufficientText, "text: need at least three tokens to decode");
  }
  return counts;
}

double population_std(std::span<const std::uint64_t> counts) {
  if (counts.empty()) return 0.0;
  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (auto c : counts) mean += static_cast<double>(c);
  mean /= n;
  double ss = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / n);
}

CountRange majority_count_range(std::size_t d, Bit lambda) noexcept {
  const auto first = static_cast<std::uint32_t>(lambda == 1 ? (d + 1) / 2 : d / 2 + 1);
  const auto last = static_cast<std::uint32_t>(d - 1);
  return {first, last};
}

std::size_t decoding_config_count(std::size_t b, std::size_t r) {
  if (r == 0 || b % r != 0 || b / r < 2) {
    throw Error(ErrorCode::kParameter, "r: must divide b with blocks of at least two bits");
  }
  return b - r;
}

DecodeResult decode_majormark(Segments segments, const WatermarkParams& params) {
  if (params.scheme != Scheme::kMajorMark) {
    throw Error(ErrorCode::kParameter, "scheme: decode_majormark needs MajorMark params");
  }
  const auto counts0 = tally(segments, params, {0, std::nullopt, 0});
  const auto counts1 = tally(segments, params, {1, std::nullopt, 0});
  const double std0 = population_std(counts0);
  const double std1 = population_std(counts1);
  const Bit lambda = std1 >= std0 ? 1 : 0;
  const auto& chosen = lambda == 1 ? counts1 : counts0;

  const TwoMeans clusters = kmeans2(chosen);
  std::vector<Bit> bits(params.b);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bits[i] = clusters.labels[i] ? lambda : static_cast<Bit>(1 - lambda);
  }
  BlockDecode block;
  block.lambda = lambda;
  block.h = static_cast<std::uint32_t>(clusters.high_size);
  block.best_std = lambda == 1 ? std1 : std0;
  block.runner_up_std = lambda == 1 ? std0 : std1;
  block.counts = chosen;
  return DecodeResult{Message(std::move(bits)), {std::move(block)}, 2};
}

DecodeResult decode_plus(Segments segments, const WatermarkParams& params) {
  if (params.scheme != Scheme::kMajorMarkPlus) {
    throw Error(ErrorCode::kParameter, "scheme: decode_plus needs MajorMark+ params");
  }
  params.validate();
  const std::size_t d = params.block_length();
  std::vector<Bit> bits;
  bits.reserve(params.b);
  std::vector<BlockDecode> blocks;
  std::size_t passes = 0;

  for (std::size_t p = 0; p < params.r; ++p) {
    BlockDecode best;
    best.best_std = -1.0;
    best.runner_up_std = -1.0;
    for (Bit lambda : {Bit{0}, Bit{1}}) {
      const CountRange range = majority_count_range(d, lambda);
      for (std::uint32_t h = range.first; h <= range.last; ++h) {
        auto counts = tally(segments, params, {lambda, h, p});
        ++passes;
        if (std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == 0) {
          throw BlockStarvationError(p);
        }
        const double sigma = population_std(counts);
        if (sigma > best.best_std) {
          best.runner_up_std = best.best_std;
          best.best_std = sigma;
          best.lambda = lambda;
          best.h = h;
          best.counts = std::move(counts);
        } else if (sigma > best.runner_up_std) {
          best.runner_up_std = sigma;
        }
      }
    }
    if (best.runner_up_std < 0) best.runner_up_std = 0.0;

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return best.counts[a] > best.counts[b];
    });
    std::vector<Bit> block(d, static_cast<Bit>(1 - best.lambda));
    for (std::size_t k = 0; k < best.h; ++k) block[order[k]] = best.lambda;
    bits.insert(bits.end(), block.begin(), block.end());
    blocks.push_back(std::move(best));
  }
  return DecodeResult{Message(std::move(bits)), std::move(blocks), passes};
}

DecodeResult decode(Segments segments, const WatermarkParams& params) {
  return params.scheme == Scheme::kMajorMark ? decode_majormark(segments, params)
                                             : decode_plus(segments, params);
}

DecodeResult decode(const TokenSeq& text, const WatermarkParams& params) {
  return decode(Segments(&text, 1), params);
}

}  // namespace majormark
