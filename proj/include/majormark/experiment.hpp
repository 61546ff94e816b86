// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "majormark/message.hpp"
#include "majormark/params.hpp"
#include "majormark/toy_lm.hpp"

namespace majormark {

struct AttackConfig {
  double fraction = 0.10;
  std::uint64_t seed = 0xa77ac4;
};

struct ExperimentConfig {
  std::size_t users = 20;
  std::size_t prompts_per_user = 2;
  std::size_t tokens_per_prompt = 250;
  std::size_t prompt_length = 4;
  WatermarkParams params;
  ToyModelSpec model;
  std::uint64_t trial_seed = 2024;
  std::optional<AttackConfig> attack;

  /// Throws Error(kParameter) naming the field.
  void validate() const;
  std::size_t tokens_per_user() const noexcept {
    return prompts_per_user * tokens_per_prompt;
  }
};

struct UserTexts {
  std::vector<TokenSeq> prompts;
  /// Final texts, after the attack when one is configured.
  std::vector<TokenSeq> texts;
};

struct UserResult {
  std::size_t user = 0;
  Message message{std::vector<Bit>{0, 1}};
  std::optional<Message> decoded;
  /// Decode failures score 0.5 (chance) and are flagged here.
  std::optional<std::string> error;
  double bit_accuracy = 0.5;
  double top5_hit_rate = 0.0;
  double perplexity = 1.0;
  double baseline_perplexity = 1.0;
  double green_fraction = 0.0;
  double gamma = 0.5;
  std::size_t passes = 0;
  std::size_t replaced_positions = 0;
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<UserResult> users;
  std::vector<UserTexts> texts;
  Stat bit_accuracy;
  Stat top5_hit_rate;
  Stat perplexity;
  Stat baseline_perplexity;
  std::size_t decode_failures = 0;

  double perplexity_delta() const noexcept {
    return perplexity.mean - baseline_perplexity.mean;
  }
};

/// Per user: a random feasible message, prompts_per_user watermarked texts
/// plus same-prompt unwatermarked texts (perplexity baseline and attack
/// filler), one decode over all of the user's texts, and metrics.
/// Deterministic in the config; each user draws from its own sub-stream.
ExperimentReport run_experiment(const ExperimentConfig& config);

Stat mean_and_std(const std::vector<double>& values);

nlohmann::json to_json(const WatermarkParams& params);
WatermarkParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentReport& report);
/// One row per user.
std::string to_csv(const ExperimentReport& report);

}  // namespace majormark
