// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include "majormark/experiment.hpp"

#include <cmath>
#include <sstream>

#include "majormark/decoder.hpp"
#include "majormark/encoder.hpp"
#include "majormark/errors.hpp"
#include "majormark/metrics.hpp"
#include "majormark/splitmix.hpp"
#include "majormark/theory.hpp"

namespace majormark {

using nlohmann::json;

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kParameter, msg); };
  if (users == 0) fail("users: must be positive");
  if (prompts_per_user == 0) fail("prompts_per_user: must be positive");
  if (tokens_per_prompt == 0) fail("tokens_per_prompt: must be positive");
  if (prompt_length < 2) fail("prompt_length: need at least two tokens of context");
  params.validate();
  model.validate();
  if (model.vocab_size != params.vocab_size) {
    fail("model.vocab_size: must equal params.vocab_size");
  }
  if (attack && !(attack->fraction >= 0.0 && attack->fraction < 1.0)) {
    fail("attack.fraction: must lie in [0, 1)");
  }
}

Stat mean_and_std(const std::vector<double>& values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

namespace {

struct UserRun {
  UserResult result;
  UserTexts texts;
};

TokenSeq concat(const std::vector<TokenSeq>& parts) {
  TokenSeq out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

UserRun run_user(const ExperimentConfig& config, const ToyLanguageModel& model,
                 const LogitsProvider& provider, std::size_t user) {
  const std::uint64_t user_seed = derive_seed(config.trial_seed, user);
  SplitMix64 rng(user_seed);
  UserRun run;
  UserResult& res = run.result;
  res.user = user;
  res.message = random_feasible_message(config.params.b, config.params.r, rng);
  res.gamma = gamma_of(res.message, config.params.r);
  const Watermarker watermarker(config.params, res.message);

  std::vector<TokenSeq> watermarked;
  std::vector<TokenSeq> unwatermarked;
  std::size_t green = 0;
  std::size_t generated = 0;
  for (std::size_t q = 0; q < config.prompts_per_user; ++q) {
    TokenSeq prompt(config.prompt_length);
    for (auto& t : prompt) t = static_cast<TokenId>(rng.below(config.params.vocab_size));
    const Generation gen = generate(provider, watermarker, prompt, config.tokens_per_prompt,
                                    derive_seed(user_seed, 2 * q + 1));
    for (auto g : gen.green) green += g;
    generated += gen.tokens.size();
    watermarked.push_back(gen.tokens);
    unwatermarked.push_back(generate_unwatermarked(provider, prompt, config.tokens_per_prompt,
                                                   derive_seed(user_seed, 2 * q + 2)));
    run.texts.prompts.push_back(std::move(prompt));
  }
  res.green_fraction = static_cast<double>(green) / static_cast<double>(generated);

  HitCount hits;
  NllSum nll;
  NllSum baseline_nll;
  for (std::size_t q = 0; q < watermarked.size(); ++q) {
    const HitCount h = top5_hits(model, watermarked[q], run.texts.prompts[q]);
    hits.hits += h.hits;
    hits.positions += h.positions;
    const NllSum n = negative_log_likelihood(model, watermarked[q], run.texts.prompts[q]);
    nll.total += n.total;
    nll.tokens += n.tokens;
    const NllSum bn = negative_log_likelihood(model, unwatermarked[q], run.texts.prompts[q]);
    baseline_nll.total += bn.total;
    baseline_nll.tokens += bn.tokens;
  }
  res.top5_hit_rate = hits.rate();
  res.perplexity = std::exp(nll.total / static_cast<double>(nll.tokens));
  res.baseline_perplexity = std::exp(baseline_nll.total / static_cast<double>(baseline_nll.tokens));

  run.texts.texts = watermarked;
  if (config.attack) {
    // The attack sees the user's whole token stream; segments keep their
    // boundaries afterwards.
    const AttackResult attacked =
        copy_paste_attack(concat(watermarked), concat(unwatermarked), config.attack->fraction,
                          derive_seed(config.attack->seed, user));
    res.replaced_positions = attacked.positions.size();
    auto it = attacked.tokens.begin();
    for (auto& text : run.texts.texts) {
      std::copy(it, it + static_cast<std::ptrdiff_t>(text.size()), text.begin());
      it += static_cast<std::ptrdiff_t>(text.size());
    }
  }

  try {
    const DecodeResult decoded = decode(Segments(run.texts.texts), config.params);
    res.bit_accuracy = bit_accuracy(res.message, decoded.message);
    res.passes = decoded.passes;
    res.decoded = decoded.message;
  } catch (const Error& e) {
    if (!e.is_decode_failure()) throw;
    res.error = std::string(to_string(e.code())) + ": " + e.what();
    res.bit_accuracy = 0.5;
  }
  return run;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const ToyLanguageModel model(config.model);
  const LogitsProvider provider = model.provider();
  ExperimentReport report;
  report.config = config;
  std::vector<double> ba, top5, ppl, base_ppl;
  for (std::size_t u = 0; u < config.users; ++u) {
    UserRun run = run_user(config, model, provider, u);
    ba.push_back(run.result.bit_accuracy);
    top5.push_back(run.result.top5_hit_rate);
    ppl.push_back(run.result.perplexity);
    base_ppl.push_back(run.result.baseline_perplexity);
    if (run.result.error) ++report.decode_failures;
    report.users.push_back(std::move(run.result));
    report.texts.push_back(std::move(run.texts));
  }
  report.bit_accuracy = mean_and_std(ba);
  report.top5_hit_rate = mean_and_std(top5);
  report.perplexity = mean_and_std(ppl);
  report.baseline_perplexity = mean_and_std(base_ppl);
  return report;
}

json to_json(const WatermarkParams& params) {
  return {{"scheme", std::string(to_string(params.scheme))},
          {"b", params.b},
          {"r", params.r},
          {"delta", params.delta},
          {"key", params.key},
          {"vocab_size", params.vocab_size}};
}

WatermarkParams params_from_json(const json& j) {
  WatermarkParams p;
  const std::string scheme = j.value("scheme", std::string(to_string(p.scheme)));
  const auto parsed = parse_scheme(scheme);
  if (!parsed) throw Error(ErrorCode::kParameter, "scheme: expected 'majormark' or 'plus'");
  p.scheme = *parsed;
  p.b = j.value("b", p.b);
  p.r = j.value("r", p.scheme == Scheme::kMajorMark ? std::size_t{1} : std::size_t{2});
  p.delta = j.value("delta", p.delta);
  p.key = j.value("key", p.key);
  p.vocab_size = j.value("vocab_size", p.vocab_size);
  return p;
}

json to_json(const ExperimentConfig& c) {
  json j = {{"users", c.users},
            {"prompts_per_user", c.prompts_per_user},
            {"tokens_per_prompt", c.tokens_per_prompt},
            {"prompt_length", c.prompt_length},
            {"params", to_json(c.params)},
            {"model",
             {{"vocab_size", c.model.vocab_size},
              {"model_seed", c.model.model_seed},
              {"concentration", c.model.concentration}}},
            {"trial_seed", c.trial_seed}};
  if (c.attack) j["attack"] = {{"fraction", c.attack->fraction}, {"seed", c.attack->seed}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig c;
    if (!j.is_object()) throw Error(ErrorCode::kParameter, "config: expected a JSON object");
    c.users = j.value("users", c.users);
    c.prompts_per_user = j.value("prompts_per_user", c.prompts_per_user);
    c.tokens_per_prompt = j.value("tokens_per_prompt", c.tokens_per_prompt);
    c.prompt_length = j.value("prompt_length", c.prompt_length);
    c.trial_seed = j.value("trial_seed", c.trial_seed);
    if (j.contains("params")) c.params = params_from_json(j.at("params"));
    const json model = j.contains("model") ? j.at("model") : j.value("toy", json::object());
    c.model.vocab_size = model.value("vocab_size", c.params.vocab_size);
    c.model.model_seed = model.value("model_seed", c.model.model_seed);
    c.model.concentration = model.value("concentration", c.model.concentration);
    if (j.contains("attack") && !j.at("attack").is_null()) {
      AttackConfig a;
      a.fraction = j.at("attack").value("fraction", a.fraction);
      a.seed = j.at("attack").value("seed", a.seed);
      c.attack = a;
    }
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParameter, std::string("config: ") + e.what());
  }
}

json to_json(const ExperimentReport& report) {
  json users = json::array();
  for (const auto& u : report.users) {
    json row = {{"user", u.user},
                {"message", u.message.to_string()},
                {"decoded", u.decoded ? json(u.decoded->to_string()) : json(nullptr)},
                {"bit_accuracy", u.bit_accuracy},
                {"top5_hit_rate", u.top5_hit_rate},
                {"perplexity", u.perplexity},
                {"baseline_perplexity", u.baseline_perplexity},
                {"green_fraction", u.green_fraction},
                {"gamma", u.gamma},
                {"passes", u.passes},
                {"replaced_positions", u.replaced_positions}};
    row["error"] = u.error ? json(*u.error) : json(nullptr);
    users.push_back(std::move(row));
  }
  auto stat = [](const Stat& s) { return json{{"mean", s.mean}, {"std", s.std}}; };
  return {{"config", to_json(report.config)},
          {"summary",
           {{"bit_accuracy", stat(report.bit_accuracy)},
            {"top5_hit_rate", stat(report.top5_hit_rate)},
            {"perplexity", stat(report.perplexity)},
            {"baseline_perplexity", stat(report.baseline_perplexity)},
            {"perplexity_delta", report.perplexity_delta()},
            {"decode_failures", report.decode_failures},
            {"attack", report.config.attack ? json("copy-paste") : json(nullptr)}}},
          {"users", std::move(users)}};
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "user,message,decoded,bit_accuracy,top5_hit_rate,perplexity,baseline_perplexity,"
         "green_fraction,gamma,passes,replaced_positions,error\n";
  for (const auto& u : report.users) {
    out << u.user << ',' << u.message.to_string() << ','
        << (u.decoded ? u.decoded->to_string() : "") << ',' << u.bit_accuracy << ','
        << u.top5_hit_rate << ',' << u.perplexity << ',' << u.baseline_perplexity << ','
        << u.green_fraction << ',' << u.gamma << ',' << u.passes << ',' << u.replaced_positions
        << ',' << (u.error ? '"' + *u.error + '"' : std::string()) << '\n';
  }
  return out.str();
}

}  // namespace majormark
