// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

// majormark: encode / decode / attack / experiment / verify-theory / layout.
//
// Exit codes: 0 success, 2 validation error, 3 decode failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "majormark/decoder.hpp"
#include "majormark/encoder.hpp"
#include "majormark/errors.hpp"
#include "majormark/experiment.hpp"
#include "majormark/keyed_partition.hpp"
#include "majormark/metrics.hpp"
#include "majormark/theory.hpp"
#include "majormark/token_io.hpp"
#include "majormark/toy_lm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace majormark;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDecode = 3;

constexpr std::uint64_t kDefaultModelSeed = 0x5eed;
constexpr std::uint64_t kDefaultSamplerSeed = 1;
constexpr std::uint64_t kDefaultAttackSeed = 0xa77ac4;
constexpr std::size_t kPromptLength = 4;
constexpr std::size_t kTheoryTrials = 100000;
constexpr std::size_t kLayoutPermutationLimit = 10000;

struct Options {
  std::string scheme = "majormark";
  std::size_t b = 8;
  std::optional<std::size_t> r;
  double delta = 2.0;
  std::uint64_t key = kDefaultKey;
  std::string message;
  std::size_t vocab_size = kDefaultVocabSize;
  std::size_t tokens = 500;
  std::uint64_t model_seed = kDefaultModelSeed;
  std::uint64_t sampler_seed = kDefaultSamplerSeed;
  std::uint64_t attack_seed = kDefaultAttackSeed;
  double fraction = 0.10;
  std::string config;
  std::string out;
  std::string input = "-";
  std::vector<TokenId> context;
  // Set when the flag appeared on the command line.
  bool scheme_given = false;
  bool b_given = false;
  bool key_given = false;
  bool vocab_given = false;
};

// Flags win; otherwise a token-file header (decode), otherwise the message
// length for --b, otherwise the defaults.
WatermarkParams resolve_params(const Options& o, const json& header = json::object()) {
  WatermarkParams p;
  if (header.contains("params")) p = params_from_json(header.at("params"));
  if (o.scheme_given || !header.contains("params")) {
    const auto scheme = parse_scheme(o.scheme);
    if (!scheme) throw Error(ErrorCode::kParameter, "--scheme: expected 'majormark' or 'plus'");
    p.scheme = *scheme;
  }
  if (o.b_given) {
    p.b = o.b;
  } else if (!header.contains("params")) {
    p.b = o.message.empty() ? o.b : o.message.size();
  }
  if (o.r) {
    p.r = *o.r;
  } else if (!header.contains("params") || o.scheme_given) {
    p.r = p.scheme == Scheme::kMajorMark ? 1 : 2;
  }
  p.delta = o.delta;
  if (o.key_given || !header.contains("params")) p.key = o.key;
  if (o.vocab_given || !header.contains("params")) p.vocab_size = o.vocab_size;
  p.validate();
  return p;
}

ToyModelSpec resolve_model(const Options& o) {
  ToyModelSpec spec;
  spec.vocab_size = o.vocab_size;
  spec.model_seed = o.model_seed;
  spec.validate();
  return spec;
}

json model_json(const ToyModelSpec& spec) {
  return {{"vocab_size", spec.vocab_size},
          {"model_seed", spec.model_seed},
          {"concentration", spec.concentration}};
}

TokenSeq default_prompt(std::uint64_t sampler_seed, std::size_t vocab_size) {
  SplitMix64 rng(derive_seed(sampler_seed, 0x9207));
  TokenSeq prompt(kPromptLength);
  for (auto& t : prompt) t = static_cast<TokenId>(rng.below(vocab_size));
  return prompt;
}

TokenFile read_input(const std::string& input) {
  if (input == "-") return read_token_jsonl(std::cin);
  return read_token_jsonl(fs::path(input));
}

// Writes the payload to --out (plus a manifest) or to stdout.
void emit(const Options& o, const std::string& command, const std::string& payload,
          const json& config, const json& seeds) {
  if (o.out.empty()) {
    std::cout << payload;
    return;
  }
  const fs::path out(o.out);
  write_file_atomic(out, payload);
  const json manifest = {{"command", command},
                         {"version", std::string(library_version())},
                         {"config", config},
                         {"seeds", seeds},
                         {"outputs", {{out.filename().string(), file_digest(out)}}}};
  fs::path manifest_path = out;
  manifest_path += ".manifest.json";
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");
}

int run_encode(const Options& o) {
  const WatermarkParams params = resolve_params(o);
  const Message message = Message::parse(o.message);
  const ToyModelSpec spec = resolve_model(o);
  const Watermarker watermarker(params, message);
  const TokenSeq prompt = default_prompt(o.sampler_seed, params.vocab_size);
  const Generation gen =
      generate(ToyLanguageModel(spec).provider(), watermarker, prompt, o.tokens, o.sampler_seed);

  std::size_t green = 0;
  for (auto g : gen.green) green += g;
  TokenFile file;
  file.header = {{"format", "majormark-tokens"},
                 {"command", "encode"},
                 {"version", std::string(library_version())},
                 {"params", to_json(params)},
                 {"message", message.to_string()},
                 {"model", model_json(spec)},
                 {"sampler_seed", o.sampler_seed},
                 {"prompt", prompt},
                 {"tokens", gen.tokens.size()},
                 {"gamma", gamma_of(message, params.r)},
                 {"green_tokens", green},
                 {"green_fraction", gen.green_fraction()}};
  file.tokens = gen.tokens;
  std::ostringstream out;
  write_token_jsonl(out, file);
  json config = to_json(params);
  config["message"] = message.to_string();
  config["tokens"] = o.tokens;
  config["model"] = model_json(spec);
  emit(o, "encode", out.str(), config,
       {{"model_seed", o.model_seed}, {"sampler_seed", o.sampler_seed}});
  return kExitOk;
}

int run_decode(const Options& o) {
  const TokenFile file = read_input(o.input);
  const WatermarkParams params = resolve_params(o, file.header);
  const DecodeResult result = decode(file.tokens, params);
  json blocks = json::array();
  for (const auto& b : result.blocks) {
    blocks.push_back({{"lambda", b.lambda},
                      {"h", b.h},
                      {"best_std", b.best_std},
                      {"runner_up_std", b.runner_up_std}});
  }
  const json out = {{"decoded_message", result.message.to_string()},
                    {"per_block", blocks},
                    {"passes_performed", result.passes}};
  json config = to_json(params);
  config["input"] = o.input;
  emit(o, "decode", out.dump(2) + "\n", config, json::object());
  return kExitOk;
}

int run_attack(const Options& o) {
  const TokenFile file = read_input(o.input);
  const ToyModelSpec spec = resolve_model(o);
  TokenSeq prompt = default_prompt(o.sampler_seed, spec.vocab_size);
  if (file.header.contains("prompt")) prompt = file.header.at("prompt").get<TokenSeq>();
  // Unwatermarked filler from the same prompt, independent sampler stream.
  const TokenSeq filler = generate_unwatermarked(ToyLanguageModel(spec).provider(), prompt,
                                                 file.tokens.size(),
                                                 derive_seed(o.sampler_seed, 0xf111e5));
  const AttackResult attacked = copy_paste_attack(file.tokens, filler, o.fraction, o.attack_seed);

  TokenFile outfile;
  outfile.header = file.header;
  outfile.header["attack"] = {{"kind", "copy-paste"},
                              {"fraction", o.fraction},
                              {"attack_seed", o.attack_seed},
                              {"filler_model", model_json(spec)},
                              {"filler_sampler_seed", o.sampler_seed},
                              {"replaced_positions", attacked.positions}};
  outfile.tokens = attacked.tokens;
  std::ostringstream out;
  write_token_jsonl(out, outfile);
  const json config = {{"input", o.input}, {"fraction", o.fraction}, {"model", model_json(spec)}};
  emit(o, "attack", out.str(), config,
       {{"attack_seed", o.attack_seed},
        {"model_seed", o.model_seed},
        {"sampler_seed", o.sampler_seed}});
  return kExitOk;
}

int run_experiment_cmd(const Options& o) {
  std::ifstream in(o.config);
  if (!in) throw Error(ErrorCode::kParameter, "--config: cannot open " + o.config);
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParameter, std::string("--config: ") + e.what());
  }
  const ExperimentConfig config = config_from_json(raw);
  const ExperimentReport report = run_experiment(config);

  for (const auto& u : report.users) {
    std::cerr << "user " << u.user << ": ba=" << u.bit_accuracy << " top5=" << u.top5_hit_rate
              << " ppl=" << u.perplexity << (u.error ? " error=" + *u.error : "") << '\n';
  }

  const fs::path dir(o.out.empty() ? "experiment_out" : o.out);
  fs::create_directories(dir);
  std::ostringstream tokens;
  for (std::size_t u = 0; u < report.texts.size(); ++u) {
    for (std::size_t q = 0; q < report.texts[u].texts.size(); ++q) {
      tokens << json{{"user", u},
                     {"prompt_index", q},
                     {"prompt", report.texts[u].prompts[q]},
                     {"tokens", report.texts[u].texts[q]}}
                    .dump()
             << '\n';
    }
  }
  const std::vector<std::pair<std::string, std::string>> outputs = {
      {"report.json", to_json(report).dump(2) + "\n"},
      {"users.csv", to_csv(report)},
      {"tokens.jsonl", tokens.str()}};
  json digests = json::object();
  for (const auto& [name, contents] : outputs) {
    write_file_atomic(dir / name, contents);
    digests[name] = file_digest(dir / name);
  }
  json seeds = {{"trial_seed", config.trial_seed}, {"model_seed", config.model.model_seed}};
  if (config.attack) seeds["attack_seed"] = config.attack->seed;
  const json manifest = {{"command", "experiment"},
                         {"version", std::string(library_version())},
                         {"config", to_json(config)},
                         {"seeds", seeds},
                         {"outputs", digests}};
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "ba=" << report.bit_accuracy.mean << " top5=" << report.top5_hit_rate.mean
            << " ppl=" << report.perplexity.mean << " failures=" << report.decode_failures
            << " -> " << dir.string() << '\n';
  return kExitOk;
}

int run_verify_theory(const Options& o, bool b_given) {
  std::vector<std::pair<std::size_t, std::size_t>> grid;
  if (b_given || o.r) {
    grid.emplace_back(o.b, o.r.value_or(1));
  } else {
    for (std::size_t b : {8, 16, 32, 64}) {
      for (std::size_t r : {1, 2, 4}) grid.emplace_back(b, r);
    }
  }
  json rows = json::array();
  std::ostringstream text;
  for (const auto& [b, r] : grid) {
    if (r == 0 || b % r != 0 || b / r < 2 || b / r > 64) {
      throw Error(ErrorCode::kParameter, "--r: must divide --b with 2 <= b/r <= 64");
    }
    const std::size_t d = b / r;
    const Rational exact = expected_gamma_exact(d);
    const double formula = expected_gamma_formula(b, r);
    const GammaEstimate mc = monte_carlo_gamma(b, r, kTheoryTrials, o.sampler_seed);
    const GammaEstimate mc_feasible = monte_carlo_gamma(b, r, kTheoryTrials, o.sampler_seed, true);
    char line[512];
    std::snprintf(line, sizeof line,
                  "b=%zu r=%zu d=%zu exact=%.6f (%s) formula=%.6f monte_carlo=%.6f+-%.6f "
                  "feasible_only=%.6f min=%.6f infeasible_codes=%s\n",
                  b, r, d, exact.to_double(), exact.to_string().c_str(), formula, mc.mean,
                  mc.standard_error, mc_feasible.mean, mc.min,
                  b <= 127 ? to_string(infeasible_code_count(b, r)).c_str() : "n/a");
    text << line;
    rows.push_back({{"b", b},
                    {"r", r},
                    {"exact", exact.to_double()},
                    {"exact_fraction", exact.to_string()},
                    {"formula", formula},
                    {"monte_carlo_mean", mc.mean},
                    {"monte_carlo_stderr", mc.standard_error},
                    {"monte_carlo_feasible_mean", mc_feasible.mean},
                    {"monte_carlo_min", mc.min},
                    {"violations", mc.violations},
                    {"trials", mc.trials},
                    {"infeasible_codes", to_string(infeasible_code_count(b, r))}});
  }
  std::cout << text.str();
  if (!o.out.empty()) {
    Options quiet = o;
    emit(quiet, "verify-theory", json{{"rows", rows}}.dump(2) + "\n",
         json{{"grid", rows.size()}, {"trials", kTheoryTrials}},
         json{{"sampler_seed", o.sampler_seed}});
  }
  return kExitOk;
}

int run_layout(const Options& o) {
  const WatermarkParams params = resolve_params(o);
  const Message message = Message::parse(o.message);
  if (o.context.size() != 2) {
    throw Error(ErrorCode::kParameter, "context: pass exactly two tokens: x_{t-1} x_{t-2}");
  }
  const Watermarker wm(params, message);
  const EncodeContext ctx{o.context[0], o.context[1]};
  if (ctx.prev >= params.vocab_size || ctx.prev_prev >= params.vocab_size) {
    throw Error(ErrorCode::kToken, "context: token id out of range");
  }
  const std::size_t p = wm.block_for(ctx);
  const ShardLayout layout = wm.layout_for(ctx);
  const GreenList green = green_list(layout, wm.block_bits(p), wm.block_majority(p).lambda);
  json sizes = json::array();
  for (std::size_t i = 0; i < layout.n_shards(); ++i) sizes.push_back(layout.shard_size(i));
  json out = {{"seed", wm.seed_for(ctx)},
              {"block", p},
              {"lambda", wm.block_majority(p).lambda},
              {"h", wm.block_majority(p).h},
              {"n_shards", layout.n_shards()},
              {"boundaries", std::vector<std::size_t>(layout.boundaries().begin(),
                                                      layout.boundaries().end())},
              {"shard_sizes", sizes},
              {"green_ratio", green.ratio()}};
  if (layout.vocab_size() <= kLayoutPermutationLimit) {
    out["permutation"] =
        std::vector<TokenId>(layout.permutation().begin(), layout.permutation().end());
  }
  emit(o, "layout", out.dump() + "\n", to_json(params), json::object());
  return kExitOk;
}

struct ParamFlags {
  CLI::Option* scheme = nullptr;
  CLI::Option* b = nullptr;
  CLI::Option* key = nullptr;
  CLI::Option* vocab = nullptr;

  void mark(Options& o) const {
    o.scheme_given = scheme && scheme->count() > 0;
    o.b_given = b && b->count() > 0;
    o.key_given = key && key->count() > 0;
    o.vocab_given = vocab && vocab->count() > 0;
  }
};

ParamFlags add_param_flags(CLI::App* cmd, Options& o, bool with_delta) {
  ParamFlags flags;
  flags.scheme = cmd->add_option("--scheme", o.scheme, "majormark or plus")
                     ->check(CLI::IsMember({"majormark", "plus"}));
  flags.b = cmd->add_option("--b", o.b, "Message length in bits (default: message length)");
  cmd->add_option("--r", o.r, "Block count (MajorMark+; default 2)");
  if (with_delta) cmd->add_option("--delta", o.delta, "Watermark bias in logit units");
  flags.key = cmd->add_option("--key", o.key, "Secret key");
  flags.vocab = cmd->add_option("--vocab-size", o.vocab_size, "Vocabulary size");
  return flags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MajorMark / MajorMark+ multi-bit text watermarking"};
  app.require_subcommand(1);
  Options o;

  auto* encode = app.add_subcommand("encode", "Generate watermarked toy-LM tokens");
  const ParamFlags encode_flags = add_param_flags(encode, o, true);
  encode->add_option("--message", o.message, "Bit-string payload")->required();
  encode->add_option("--tokens", o.tokens, "Number of tokens to generate");
  encode->add_option("--model-seed", o.model_seed, "Toy model seed");
  encode->add_option("--sampler-seed", o.sampler_seed, "Sampler seed");
  encode->add_option("--out", o.out, "Output JSONL (default stdout)");

  auto* decode_cmd = app.add_subcommand("decode", "Recover the message from a token JSONL");
  const ParamFlags decode_flags = add_param_flags(decode_cmd, o, false);
  decode_cmd->add_option("input", o.input, "Token JSONL ('-' for stdin)");
  decode_cmd->add_option("--out", o.out, "Output JSON (default stdout)");

  auto* attack = app.add_subcommand("attack", "Copy-paste attack on a token JSONL");
  attack->add_option("input", o.input, "Token JSONL ('-' for stdin)");
  attack->add_option("--fraction", o.fraction, "Fraction of positions to replace");
  attack->add_option("--attack-seed", o.attack_seed, "Position-selection seed");
  attack->add_option("--vocab-size", o.vocab_size, "Vocabulary size");
  attack->add_option("--model-seed", o.model_seed, "Toy model seed for filler text");
  attack->add_option("--sampler-seed", o.sampler_seed, "Sampler seed for filler text");
  attack->add_option("--out", o.out, "Output JSONL (default stdout)");

  auto* experiment = app.add_subcommand("experiment", "Run a multi-user experiment");
  experiment->add_option("--config", o.config, "ExperimentConfig JSON")->required();
  experiment->add_option("--out", o.out, "Output directory (default experiment_out)");

  auto* theory = app.add_subcommand("verify-theory", "Expected green-list ratio checks");
  auto* b_opt = theory->add_option("--b", o.b, "Message length (default: grid)");
  theory->add_option("--r", o.r, "Block count");
  theory->add_option("--sampler-seed", o.sampler_seed, "Monte Carlo seed");
  theory->add_option("--out", o.out, "Also write JSON here");

  auto* layout = app.add_subcommand("layout", "Dump one step's shard layout as JSON");
  const ParamFlags layout_flags = add_param_flags(layout, o, false);
  layout->add_option("--message", o.message, "Bit-string payload")->required();
  layout->add_option("context", o.context, "x_{t-1} x_{t-2}")->expected(2);
  layout->add_option("--out", o.out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (*encode) encode_flags.mark(o);
  if (*decode_cmd) decode_flags.mark(o);
  if (*layout) layout_flags.mark(o);
  if (*attack) o.vocab_given = true;

  try {
    if (*encode) return run_encode(o);
    if (*decode_cmd) return run_decode(o);
    if (*attack) return run_attack(o);
    if (*experiment) return run_experiment_cmd(o);
    if (*theory) return run_verify_theory(o, b_opt->count() > 0);
    if (*layout) return run_layout(o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return e.is_decode_failure() ? kExitDecode : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
