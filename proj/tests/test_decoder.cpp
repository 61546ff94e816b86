// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "majormark/decoder.hpp"
#include "majormark/encoder.hpp"
#include "majormark/errors.hpp"
#include "majormark/metrics.hpp"
#include "majormark/theory.hpp"
#include "majormark/toy_lm.hpp"

namespace majormark {
namespace {

WatermarkParams mm_params(std::size_t b, double delta) {
  WatermarkParams p;
  p.b = b;
  p.delta = delta;
  return p;
}

WatermarkParams plus_params(std::size_t b, std::size_t r, double delta) {
  WatermarkParams p = mm_params(b, delta);
  p.scheme = Scheme::kMajorMarkPlus;
  p.r = r;
  return p;
}

const ToyLanguageModel& model() {
  static const ToyLanguageModel m(ToyModelSpec{});
  return m;
}

const TokenSeq kPrompt{8, 9, 10, 11};

TokenSeq watermarked(const WatermarkParams& p, const Message& m, std::size_t length,
                     std::uint64_t seed) {
  return generate(model().provider(), p, m, kPrompt, length, seed).tokens;
}

std::uint64_t total(const std::vector<std::uint64_t>& counts) {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

TEST(Tally, DiscardsFirstTwoTokensPerSegment) {
  const WatermarkParams p = mm_params(8, 1.0);
  const std::vector<TokenSeq> three{{1, 2, 3}};
  EXPECT_EQ(total(tally(three, p, {1, {}, 0})), 1u);

  const TokenSeq text = watermarked(p, Message::parse("10110100"), 120, 3);
  const std::vector<TokenSeq> one{text};
  EXPECT_EQ(total(tally(one, p, {0, {}, 0})), 118u);
  const std::vector<TokenSeq> split{TokenSeq(text.begin(), text.begin() + 50),
                                    TokenSeq(text.begin() + 50, text.end())};
  EXPECT_EQ(total(tally(split, p, {0, {}, 0})), 116u);
}

TEST(Tally, Errors) {
  const WatermarkParams p = mm_params(8, 1.0);
  const std::vector<TokenSeq> short_text{{1, 2}, {3}};
  try {
    tally(short_text, p, {1, {}, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientText);
    EXPECT_TRUE(e.is_decode_failure());
  }
  const std::vector<TokenSeq> bad{{1, 2, 5000}};
  try {
    tally(bad, p, {1, {}, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kToken);
  }
  const std::vector<TokenSeq> ok{{1, 2, 3}};
  EXPECT_THROW(tally(ok, plus_params(8, 2, 1.0), {1, {}, 0}), Error);
}

TEST(Tally, MatchesEncoderShardLog) {
  const WatermarkParams p = mm_params(8, 2.0);
  const Message m = Message::parse("01101100");
  const Watermarker wm(p, m);
  const Generation g = generate(model().provider(), wm, kPrompt, 300, 4);
  std::vector<std::uint64_t> expect(8, 0);
  for (std::size_t i = 2; i < g.tokens.size(); ++i) ++expect[g.shards[i]];
  const std::vector<TokenSeq> segs{g.tokens};
  EXPECT_EQ(tally(segs, p, {wm.block_majority(0).lambda, {}, 0}), expect);

  const WatermarkParams pp = plus_params(8, 2, 2.0);
  const Watermarker wp(pp, m);
  const Generation gp = generate(model().provider(), wp, kPrompt, 300, 4);
  for (std::size_t block = 0; block < 2; ++block) {
    const MajorityInfo info = wp.block_majority(block);
    std::vector<std::uint64_t> want(4, 0);
    for (std::size_t i = 2; i < gp.tokens.size(); ++i) {
      if (gp.blocks[i] == block) ++want[gp.shards[i]];
    }
    const std::vector<TokenSeq> s{gp.tokens};
    EXPECT_EQ(tally(s, pp, {info.lambda, info.h, block}), want);
  }
}

TEST(Tally, OrderOfSegmentsDoesNotMatter) {
  const WatermarkParams p = mm_params(8, 2.0);
  const Message m = Message::parse("01101100");
  std::vector<TokenSeq> segs{watermarked(p, m, 80, 1), watermarked(p, m, 90, 2),
                             watermarked(p, m, 70, 3)};
  const auto a = tally(segs, p, {1, {}, 0});
  std::swap(segs[0], segs[2]);
  EXPECT_EQ(tally(segs, p, {1, {}, 0}), a);
}

TEST(Decoder, CountRangesAndConfigCount) {
  EXPECT_EQ(majority_count_range(16, 1).first, 8u);
  EXPECT_EQ(majority_count_range(16, 1).last, 15u);
  EXPECT_EQ(majority_count_range(16, 0).first, 9u);
  EXPECT_EQ(majority_count_range(16, 0).last, 15u);
  EXPECT_EQ(majority_count_range(3, 1).size(), 1u);  // h = 2
  EXPECT_EQ(majority_count_range(3, 0).size(), 1u);
  EXPECT_EQ(majority_count_range(2, 0).size(), 0u);  // 01 and 10 both have lambda = 1
  for (std::size_t d = 2; d <= 64; ++d) {
    EXPECT_EQ(majority_count_range(d, 0).size() + majority_count_range(d, 1).size(), d - 1);
  }
  EXPECT_EQ(decoding_config_count(32, 2), 30u);
  EXPECT_EQ(decoding_config_count(64, 2), 62u);
  EXPECT_EQ(decoding_config_count(8, 1), 7u);
  EXPECT_THROW(decoding_config_count(8, 3), Error);
}

TEST(Decoder, SigmaTieChoosesOne) {
  // One counted token: both tallies hold a single 1 and share the same sigma.
  const std::vector<TokenSeq> segs{{4, 5, 6}};
  const DecodeResult r = decode_majormark(segs, mm_params(8, 1.0));
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].best_std, r.blocks[0].runner_up_std);
  EXPECT_EQ(r.blocks[0].lambda, 1);
}

TEST(Decoder, MajorMarkRoundtrip) {
  const WatermarkParams p = mm_params(8, 6.0);
  SplitMix64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const Message m = random_feasible_message(8, 1, rng);
    const DecodeResult r = decode(watermarked(p, m, 500, rng.next()), p);
    EXPECT_EQ(r.message, m) << m.to_string();
    EXPECT_EQ(r.passes, 2u);
  }
}

TEST(Decoder, PlusRoundtrip) {
  const WatermarkParams p = plus_params(32, 2, 4.0);
  SplitMix64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const Message m = random_feasible_message(32, 2, rng);
    const DecodeResult r = decode(watermarked(p, m, 500, rng.next()), p);
    EXPECT_EQ(r.message, m) << m.to_string();
    EXPECT_EQ(r.passes, 30u);
    ASSERT_EQ(r.blocks.size(), 2u);
    for (const BlockDecode& b : r.blocks) EXPECT_GE(b.best_std, b.runner_up_std);
  }
}

TEST(Decoder, PlusRecoversMajorityInfo) {
  const WatermarkParams p = plus_params(16, 2, 6.0);
  const Message m = Message::parse("1101101000010001");
  const Watermarker wm(p, m);
  const DecodeResult r = decode(watermarked(p, m, 500, 77), p);
  EXPECT_EQ(r.message, m);
  for (std::size_t block = 0; block < 2; ++block) {
    EXPECT_EQ(r.blocks[block].lambda, wm.block_majority(block).lambda);
    EXPECT_EQ(r.blocks[block].h, wm.block_majority(block).h);
  }
}

TEST(Decoder, BlockStarvation) {
  // Every context sum is even, so block 1 never receives a token.
  TokenSeq text;
  for (TokenId t = 0; t < 100; ++t) text.push_back(2 * t);
  try {
    decode(text, plus_params(8, 2, 1.0));
    FAIL();
  } catch (const BlockStarvationError& e) {
    EXPECT_EQ(e.block(), 1u);
    EXPECT_EQ(e.code(), ErrorCode::kBlockStarvation);
    EXPECT_TRUE(e.is_decode_failure());
  }
}

TEST(Decoder, SchemeMismatch) {
  const std::vector<TokenSeq> segs{{1, 2, 3, 4}};
  EXPECT_THROW(decode_plus(segs, mm_params(8, 1.0)), Error);
  EXPECT_THROW(decode_majormark(segs, plus_params(8, 2, 1.0)), Error);
}

TEST(Decoder, WrongKeyIsUninformative) {
  WatermarkParams p = mm_params(8, 6.0);
  WatermarkParams wrong = p;
  wrong.key = 104729;
  SplitMix64 rng(33);
  double sum = 0;
  const int trials = 30;
  for (int trial = 0; trial < trials; ++trial) {
    const Message m = random_feasible_message(8, 1, rng);
    const TokenSeq text = watermarked(p, m, 500, rng.next());
    sum += bit_accuracy(m, decode(text, wrong).message);
  }
  EXPECT_NEAR(sum / trials, 0.5, 0.12);
}

}  // namespace
}  // namespace majormark
