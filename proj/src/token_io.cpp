// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/token_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "majormark/errors.hpp"

namespace majormark {

void write_token_jsonl(std::ostream& out, const TokenFile& file) {
  out << file.header.dump() << '\n';
  for (TokenId t : file.tokens) out << t << '\n';
}

TokenFile read_token_jsonl(std::istream& in) {
  TokenFile file;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string_view body(line.data() + first, last - first + 1);
    if (body.front() == '{') {
      if (!have_header) {
        try {
          file.header = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::kParameter,
                      "tokens: bad header on line " + std::to_string(line_no) + ": " + e.what());
        }
        have_header = true;
      }
      continue;
    }
    TokenId value = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      throw Error(ErrorCode::kToken,
                  "tokens: line " + std::to_string(line_no) + " is not a token id");
    }
    file.tokens.push_back(value);
  }
  return file;
}

TokenFile read_token_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParameter, "cannot open " + path.string());
  return read_token_jsonl(in);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParameter, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return hex64(fnv1a64(buf.str()));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kParameter, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kParameter, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string_view library_version() noexcept { return "0.1.0"; }

}  // namespace majormark
