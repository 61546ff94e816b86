// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/params.hpp"

#include <cmath>

#include "majormark/errors.hpp"

namespace majormark {

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::kMajorMark ? "majormark" : "plus";
}

std::optional<Scheme> parse_scheme(std::string_view name) noexcept {
  if (name == "majormark") return Scheme::kMajorMark;
  if (name == "plus") return Scheme::kMajorMarkPlus;
  return std::nullopt;
}

void WatermarkParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kParameter, msg); };
  if (b < 2) fail("b: message length must be at least 2");
  if (r < 1) fail("r: block count must be at least 1");
  if (b % r != 0) fail("r: block count must divide b");
  if (scheme == Scheme::kMajorMark && r != 1) fail("r: MajorMark uses a single block (r = 1)");
  if (b / r < 2) fail("r: blocks must hold at least two bits");
  if (vocab_size < b / r) fail("vocab_size: need at least one token per shard");
  if (!std::isfinite(delta) || delta < 0) fail("delta: bias must be finite and non-negative");
}

}  // namespace majormark
