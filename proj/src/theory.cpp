// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/theory.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "majormark/errors.hpp"

namespace majormark {

namespace {

UInt128 gcd128(UInt128 a, UInt128 b) {
  while (b != 0) {
    const UInt128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void draw_bits(SplitMix64& rng, std::vector<Bit>& bits) {
  for (std::size_t i = 0; i < bits.size(); i += 64) {
    std::uint64_t word = rng.next();
    for (std::size_t j = i; j < bits.size() && j < i + 64; ++j, word >>= 1) bits[j] = word & 1u;
  }
}

}  // namespace

Rational make_rational(UInt128 num, UInt128 den) {
  if (den == 0) throw Error(ErrorCode::kParameter, "rational: zero denominator");
  const UInt128 g = gcd128(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

double Rational::to_double() const noexcept {
  return static_cast<long double>(num) / static_cast<long double>(den);
}

std::string Rational::to_string() const {
  return majormark::to_string(num) + "/" + majormark::to_string(den);
}

double expected_gamma_formula(std::size_t b, std::size_t r) {
  if (r == 0 || b % r != 0 || b / r < 2) {
    throw Error(ErrorCode::kParameter, "r: must divide b with blocks of at least two bits");
  }
  const double d = static_cast<double>(b / r);
  return 0.5 + 1.0 / std::sqrt(2.0 * std::numbers::pi * d);
}

Rational expected_gamma_exact(std::size_t d) {
  if (d < 2) throw Error(ErrorCode::kParameter, "d: block length must be at least 2");
  if (d > 64) throw Error(ErrorCode::kOverflow, "d: exact expectation supported up to 64");
  // Pascal row d; C(64, 32) < 2^61 so every entry fits in 64 bits.
  std::vector<UInt128> row{1};
  for (std::size_t n = 1; n <= d; ++n) {
    std::vector<UInt128> next(n + 1, 1);
    for (std::size_t k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  UInt128 numerator = 0;  // < 64 * 2^64
  for (std::size_t k = 0; k <= d; ++k) numerator += row[k] * (k > d - k ? k : d - k);
  return make_rational(numerator, (UInt128{1} << d) * d);
}

Message random_feasible_message(std::size_t b, std::size_t r, SplitMix64& rng) {
  if (r == 0 || b % r != 0 || b / r < 2) {
    throw Error(ErrorCode::kParameter, "r: must divide b with blocks of at least two bits");
  }
  std::vector<Bit> bits(b);
  for (;;) {
    draw_bits(rng, bits);
    if (is_feasible(bits, r)) return Message(bits);
  }
}

GammaEstimate monte_carlo_gamma(std::size_t b, std::size_t r, std::size_t trials,
                                std::uint64_t seed, bool feasible_only) {
  if (trials == 0) throw Error(ErrorCode::kParameter, "trials: must be positive");
  if (r == 0 || b < 2 || b % r != 0) throw Error(ErrorCode::kParameter, "r: must divide b");
  if (feasible_only && b / r < 2) {
    throw Error(ErrorCode::kParameter, "r: single-bit blocks are never feasible");
  }
  SplitMix64 rng(seed);
  std::vector<Bit> bits(b);
  GammaEstimate out;
  out.trials = trials;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    do {
      draw_bits(rng, bits);
    } while (feasible_only && !is_feasible(bits, r));
    const double gamma = gamma_of(BitView(bits), r);
    sum += gamma;
    sum_sq += gamma * gamma;
    out.min = std::min(out.min, gamma);
    if (gamma < 0.5) ++out.violations;
  }
  const double n = static_cast<double>(trials);
  out.mean = sum / n;
  const double variance = trials > 1 ? std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1)) : 0.0;
  out.standard_error = std::sqrt(variance / n);
  return out;
}

}  // namespace majormark
