// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "majormark/params.hpp"

namespace majormark {

/// Token stream file: one JSON header object on the first line, then one
/// integer token id per line.
struct TokenFile {
  nlohmann::json header = nlohmann::json::object();
  TokenSeq tokens;
};

void write_token_jsonl(std::ostream& out, const TokenFile& file);
/// Object lines are taken as the header (the first one wins); every other
/// non-blank line must be a non-negative integer.
TokenFile read_token_jsonl(std::istream& in);
TokenFile read_token_jsonl(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t value);
std::string file_digest(const std::filesystem::path& path);

/// Writes through a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string_view library_version() noexcept;

}  // namespace majormark
