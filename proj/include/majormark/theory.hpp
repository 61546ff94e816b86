// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "majormark/message.hpp"
#include "majormark/splitmix.hpp"

namespace majormark {

/// Reduced non-negative fraction over 128-bit integers.
struct Rational {
  UInt128 num = 0;
  UInt128 den = 1;

  double to_double() const noexcept;
  std::string to_string() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(UInt128 num, UInt128 den);

/// Normal approximation of the expected green-list ratio:
/// 0.5 + 1 / sqrt(2 * pi * (b / r)).
double expected_gamma_formula(std::size_t b, std::size_t r);

/// Exact expectation of max(h, d - h) / d for h ~ Binomial(d, 1/2):
/// sum_k C(d, k) max(k, d - k) / (2^d d). Supports 2 <= d <= 64.
Rational expected_gamma_exact(std::size_t d);

struct GammaEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double min = 1.0;
  std::size_t trials = 0;
  /// Draws with gamma_of < 0.5 (should always be zero).
  std::size_t violations = 0;
};

/// Monte Carlo mean of gamma_of over uniformly random b-bit messages. With
/// feasible_only, messages with an all-equal block are redrawn.
GammaEstimate monte_carlo_gamma(std::size_t b, std::size_t r,
                                std::size_t trials, std::uint64_t seed,
                                bool feasible_only = false);

/// Uniform b-bit message, redrawn until no block is all-equal.
Message random_feasible_message(std::size_t b, std::size_t r, SplitMix64& rng);

}  // namespace majormark
