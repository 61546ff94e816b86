// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "majormark/encoder.hpp"
#include "majormark/errors.hpp"
#include "majormark/toy_lm.hpp"

namespace majormark {
namespace {

double entropy(const std::vector<double>& logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double z = 0;
  for (double l : logits) z += std::exp(l - peak);
  double h = 0;
  for (double l : logits) {
    const double p = std::exp(l - peak) / z;
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

TokenSeq greedy(const ToyLanguageModel& m, const TokenSeq& prompt, std::size_t length) {
  TokenSeq seq(prompt);
  for (std::size_t i = 0; i < length; ++i) {
    const auto logits = m(seq);
    seq.push_back(static_cast<TokenId>(std::max_element(logits.begin(), logits.end()) -
                                       logits.begin()));
  }
  return TokenSeq(seq.begin() + static_cast<std::ptrdiff_t>(prompt.size()), seq.end());
}

TEST(ToyLm, Deterministic) {
  const ToyLanguageModel a(ToyModelSpec{}), b(ToyModelSpec{});
  EXPECT_EQ(a.logits(3, 4), b.logits(3, 4));
  EXPECT_NE(a.logits(3, 4), a.logits(4, 3));
  ToyModelSpec other;
  other.model_seed = 1;
  EXPECT_NE(ToyLanguageModel(other).logits(3, 4), a.logits(3, 4));
}

TEST(ToyLm, ConcentrationScalesLogits) {
  ToyModelSpec s1, s2;
  s1.concentration = 1.0;
  s2.concentration = 1e-9;
  const auto a = ToyLanguageModel(s1).logits(10, 20);
  const auto b = ToyLanguageModel(s2).logits(10, 20);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(b[i], a[i] * 1e-9, 1e-15);
  const auto [lo, hi] = std::minmax_element(b.begin(), b.end());
  EXPECT_LT(*hi - *lo, 1e-7);
}

TEST(ToyLm, StandardNormalShape) {
  ToyModelSpec s;
  s.concentration = 1.0;
  const ToyLanguageModel m(s);
  double sum = 0, sum_sq = 0;
  std::size_t n = 0;
  for (TokenId a = 0; a < 20; ++a) {
    for (double z : m.logits(a, a + 1)) {
      sum += z;
      sum_sq += z * z;
      ++n;
    }
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.03);
  EXPECT_NEAR(sum_sq / n - mean * mean, 1.0, 0.05);
}

TEST(ToyLm, PeakedAtHighConcentration) {
  ToyModelSpec s;
  s.concentration = 4.0;
  const ToyLanguageModel m(s);
  for (TokenId c = 0; c < 10; ++c) {
    auto logits = m.logits(c, 2 * c);
    std::vector<double> p(logits.size());
    double z = 0;
    for (std::size_t i = 0; i < p.size(); ++i) z += p[i] = std::exp(logits[i]);
    for (double& v : p) v /= z;
    double sum = 0;
    for (double v : p) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    std::sort(p.begin(), p.end());
    EXPECT_GE(p.back(), 10.0 * p[p.size() / 2]);
  }
}

TEST(ToyLm, EntropyFallsWithConcentration) {
  double previous = std::log(1024.0) + 1e-9;
  for (double c : {0.25, 1.0, 2.0, 4.0}) {
    ToyModelSpec s;
    s.concentration = c;
    const double h = entropy(ToyLanguageModel(s).logits(7, 9));
    EXPECT_LT(h, previous);
    previous = h;
  }
}

TEST(ToyLm, Errors) {
  ToyModelSpec s;
  s.vocab_size = 1;
  EXPECT_THROW(s.validate(), Error);
  s.vocab_size = 10;
  s.concentration = 0;
  EXPECT_THROW(s.validate(), Error);
  const ToyLanguageModel m(ToyModelSpec{});
  EXPECT_THROW(m.logits(5000, 1), Error);
  const TokenSeq one{1};
  EXPECT_THROW(m(one), Error);
}

TEST(LogSoftmax, MatchesDirectComputation) {
  const std::vector<double> logits{1.0, 2.0, 3.0};
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  EXPECT_NEAR(log_softmax_at(logits, 2), 3.0 - std::log(z), 1e-12);
  EXPECT_THROW(log_softmax_at(logits, 3), Error);
}

TEST(Perplexity, GreedyIsBestPerStep) {
  const ToyModelSpec spec;
  const ToyLanguageModel m(spec);
  const TokenSeq prompt{1, 2, 3, 4};
  const TokenSeq g = greedy(m, prompt, 200);
  const double ppl_greedy = surrogate_perplexity(spec, g, prompt);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TokenSeq s = generate_unwatermarked(m.provider(), prompt, 200, seed);
    EXPECT_LT(ppl_greedy, surrogate_perplexity(spec, s, prompt));
  }
  // In each greedy context no token has a higher log-probability.
  TokenSeq seq(prompt);
  for (TokenId t : g) {
    const auto logits = m(seq);
    const double chosen = log_softmax_at(logits, t);
    for (TokenId v = 0; v < logits.size(); v += 37) EXPECT_LE(log_softmax_at(logits, v), chosen);
    seq.push_back(t);
  }
}

TEST(Perplexity, ZeroDeltaMatchesBaseline) {
  const ToyModelSpec spec;
  const ToyLanguageModel m(spec);
  const TokenSeq prompt{40, 41, 42, 43};
  WatermarkParams p;
  p.delta = 0.0;
  const TokenSeq wm =
      generate(m.provider(), p, Message::parse("10100110"), prompt, 250, 5).tokens;
  const TokenSeq base = generate_unwatermarked(m.provider(), prompt, 250, 5);
  EXPECT_EQ(surrogate_perplexity(spec, wm, prompt), surrogate_perplexity(spec, base, prompt));
}

TEST(Perplexity, PoolsNegativeLogLikelihood) {
  const ToyModelSpec spec;
  const ToyLanguageModel m(spec);
  const TokenSeq prompt{5, 6};
  const TokenSeq text = generate_unwatermarked(m.provider(), prompt, 50, 1);
  const NllSum nll = negative_log_likelihood(m, text, prompt);
  EXPECT_EQ(nll.tokens, 50u);
  EXPECT_NEAR(std::exp(nll.total / 50.0), surrogate_perplexity(spec, text, prompt), 1e-9);
  const TokenSeq empty;
  EXPECT_THROW(surrogate_perplexity(spec, empty, prompt), Error);
}

}  // namespace
}  // namespace majormark
