// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "majormark/params.hpp"

namespace majormark {

using Bit = std::uint8_t;
using BitView = std::span<const Bit>;

/// A b-bit payload (b >= 2). Bits are stored as 0/1 bytes.
class Message {
 public:
  explicit Message(std::vector<Bit> bits);

  /// Parses an ASCII bit-string such as "1101". Rejects anything outside
  /// {0,1} and strings shorter than two bits.
  static Message parse(std::string_view text);

  std::size_t size() const noexcept { return bits_.size(); }
  BitView bits() const noexcept { return bits_; }
  Bit operator[](std::size_t i) const { return bits_[i]; }
  std::string to_string() const;
  Message complement() const;

  friend bool operator==(const Message&, const Message&) = default;

 private:
  std::vector<Bit> bits_;
};

struct MajorityInfo {
  Bit lambda = 1;
  std::uint32_t h = 0;

  friend bool operator==(const MajorityInfo&, const MajorityInfo&) = default;
};

/// Majority bit of a (sub)message. Ties resolve to lambda = 1; this is the
/// single place the tie rule lives, used by both encoder and decoder.
MajorityInfo majority_bit(BitView bits);

/// Contiguous split into r blocks of length b/r. The returned views alias
/// the message.
std::vector<BitView> split_blocks(const Message& message, std::size_t r);
std::vector<BitView> split_blocks(Message&&, std::size_t) = delete;  // views would dangle

/// Throws InfeasibleMessageError naming the first block that is all zeros or
/// all ones. Also checks that the message length matches params.b.
void validate_feasible(const Message& message, const WatermarkParams& params);

/// Same check without the params object; returns false instead of throwing.
bool is_feasible(BitView bits, std::size_t r) noexcept;

/// Green-list ratio implied by the message: mean over blocks of
/// max(h0, h1) / (b / r).
double gamma_of(const Message& message, std::size_t r);
double gamma_of(BitView bits, std::size_t r);

using UInt128 = unsigned __int128;

/// Number of b-bit messages rejected by validate_feasible with r blocks:
/// 2^b - (2^(b/r) - 2)^r, computed exactly. Throws kOverflow when 2^b does
/// not fit in 128 bits.
UInt128 infeasible_code_count(std::size_t b, std::size_t r);

std::string to_string(UInt128 value);

}  // namespace majormark
