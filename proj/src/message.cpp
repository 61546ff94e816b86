// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/message.hpp"

#include <algorithm>
#include <utility>

#include "majormark/errors.hpp"

namespace majormark {

Message::Message(std::vector<Bit> bits) : bits_(std::move(bits)) {
  if (bits_.size() < 2) {
    throw Error(ErrorCode::kInvalidMessage, "message must have at least 2 bits");
  }
  for (Bit bit : bits_) {
    if (bit > 1) throw Error(ErrorCode::kInvalidMessage, "message bits must be 0 or 1");
  }
}

Message Message::parse(std::string_view text) {
  std::vector<Bit> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kInvalidMessage,
                  std::string("message: unexpected character '") + c + "'");
    }
    bits.push_back(static_cast<Bit>(c - '0'));
  }
  return Message(std::move(bits));
}

std::string Message::to_string() const {
  std::string out(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = static_cast<char>('0' + bits_[i]);
  return out;
}

Message Message::complement() const {
  std::vector<Bit> flipped(bits_.size());
  std::transform(bits_.begin(), bits_.end(), flipped.begin(),
                 [](Bit b) { return static_cast<Bit>(1 - b); });
  return Message(std::move(flipped));
}

MajorityInfo majority_bit(BitView bits) {
  if (bits.empty()) throw Error(ErrorCode::kInvalidMessage, "majority of an empty bit sequence");
  const auto ones = static_cast<std::uint32_t>(std::count(bits.begin(), bits.end(), Bit{1}));
  const auto zeros = static_cast<std::uint32_t>(bits.size()) - ones;
  if (ones >= zeros) return {1, ones};
  return {0, zeros};
}

std::vector<BitView> split_blocks(const Message& message, std::size_t r) {
  if (r == 0 || message.size() % r != 0) {
    throw Error(ErrorCode::kParameter, "r: block count must divide the message length");
  }
  const std::size_t d = message.size() / r;
  std::vector<BitView> blocks;
  blocks.reserve(r);
  for (std::size_t p = 0; p < r; ++p) blocks.push_back(message.bits().subspan(p * d, d));
  return blocks;
}

namespace {

bool all_equal(BitView block) noexcept {
  return std::adjacent_find(block.begin(), block.end(), std::not_equal_to<>()) == block.end();
}

}  // namespace

bool is_feasible(BitView bits, std::size_t r) noexcept {
  if (r == 0 || bits.size() % r != 0) return false;
  const std::size_t d = bits.size() / r;
  for (std::size_t p = 0; p < r; ++p) {
    if (all_equal(bits.subspan(p * d, d))) return false;
  }
  return true;
}

void validate_feasible(const Message& message, const WatermarkParams& params) {
  if (message.size() != params.b) {
    throw Error(ErrorCode::kLengthMismatch,
                "message: length " + std::to_string(message.size()) +
                    " does not match b = " + std::to_string(params.b));
  }
  const auto blocks = split_blocks(message, params.r);
  for (std::size_t p = 0; p < blocks.size(); ++p) {
    if (all_equal(blocks[p])) throw InfeasibleMessageError(p);
  }
}

double gamma_of(BitView bits, std::size_t r) {
  if (r == 0 || bits.size() % r != 0 || bits.empty()) {
    throw Error(ErrorCode::kParameter, "r: block count must divide the message length");
  }
  const std::size_t d = bits.size() / r;
  std::size_t majority_total = 0;
  for (std::size_t p = 0; p < r; ++p) majority_total += majority_bit(bits.subspan(p * d, d)).h;
  return static_cast<double>(majority_total) / static_cast<double>(bits.size());
}

double gamma_of(const Message& message, std::size_t r) { return gamma_of(message.bits(), r); }

UInt128 infeasible_code_count(std::size_t b, std::size_t r) {
  if (r == 0 || b == 0 || b % r != 0) {
    throw Error(ErrorCode::kParameter, "r: block count must divide b");
  }
  if (b > 127) {
    throw Error(ErrorCode::kOverflow, "b: 2^b exceeds 128-bit arithmetic");
  }
  const std::size_t d = b / r;
  const UInt128 per_block = (UInt128{1} << d) - 2;
  UInt128 feasible = 1;
  for (std::size_t p = 0; p < r; ++p) feasible *= per_block;  // <= 2^b, no overflow
  return (UInt128{1} << b) - feasible;
}

std::string to_string(UInt128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return {digits.rbegin(), digits.rend()};
}

}  // namespace majormark
