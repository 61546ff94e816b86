// Copyright 2026 The MajorMark Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "majormark/decoder.hpp"
#include "majormark/encoder.hpp"
#include "majormark/errors.hpp"
#include "majormark/experiment.hpp"
#include "majormark/keyed_partition.hpp"
#include "majormark/kmeans.hpp"
#include "majormark/metrics.hpp"
#include "majormark/theory.hpp"
#include "majormark/token_io.hpp"
#include "majormark/toy_lm.hpp"

namespace py = pybind11;
using namespace majormark;

namespace {

py::int_ to_pyint(UInt128 v) {
  return py::module_::import("builtins").attr("int")(to_string(v));
}

Message to_message(const std::string& bits) { return Message::parse(bits); }

// Raw bit parsing for operations that accept sequences shorter than a Message.
std::vector<Bit> to_bits(const std::string& text) {
  std::vector<Bit> bits;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(ErrorCode::kInvalidMessage, "bits: expected 0/1 only");
    bits.push_back(static_cast<Bit>(c - '0'));
  }
  return bits;
}

py::dict decode_to_dict(const DecodeResult& r) {
  py::list blocks;
  for (const auto& b : r.blocks) {
    py::dict d;
    d["lambda"] = b.lambda;
    d["h"] = b.h;
    d["best_std"] = b.best_std;
    d["runner_up_std"] = b.runner_up_std;
    d["counts"] = b.counts;
    blocks.append(d);
  }
  py::dict out;
  out["decoded_message"] = r.message.to_string();
  out["per_block"] = blocks;
  out["passes_performed"] = r.passes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_majormark, m) {
  m.doc() = "MajorMark / MajorMark+ multi-bit text watermarking (C++ core)";

  static py::exception<Error> error_type(m, "MajorMarkError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type.ptr(),
                      (std::string("[") + to_string(e.code()) + "] " + e.what()).c_str());
    }
  });

  py::enum_<Scheme>(m, "Scheme")
      .value("MAJORMARK", Scheme::kMajorMark)
      .value("PLUS", Scheme::kMajorMarkPlus);

  py::class_<WatermarkParams>(m, "WatermarkParams")
      .def(py::init([](const std::string& scheme, std::size_t b, std::size_t r, double delta,
                       std::uint64_t key, std::size_t vocab_size) {
             const auto s = parse_scheme(scheme);
             if (!s) throw Error(ErrorCode::kParameter, "scheme: expected 'majormark' or 'plus'");
             WatermarkParams p{*s, key, b, r, delta, vocab_size};
             p.validate();
             return p;
           }),
           py::arg("scheme") = "majormark", py::arg("b") = 8, py::arg("r") = 1,
           py::arg("delta") = 2.0, py::arg("key") = kDefaultKey,
           py::arg("vocab_size") = kDefaultVocabSize)
      .def_readonly("scheme", &WatermarkParams::scheme)
      .def_readonly("b", &WatermarkParams::b)
      .def_readonly("r", &WatermarkParams::r)
      .def_readonly("delta", &WatermarkParams::delta)
      .def_readonly("key", &WatermarkParams::key)
      .def_readonly("vocab_size", &WatermarkParams::vocab_size);

  py::class_<ToyModelSpec>(m, "ToyModelSpec")
      .def(py::init([](std::size_t vocab_size, std::uint64_t model_seed, double concentration) {
             ToyModelSpec s{vocab_size, model_seed, concentration};
             s.validate();
             return s;
           }),
           py::arg("vocab_size") = kDefaultVocabSize, py::arg("model_seed") = 0x5eed,
           py::arg("concentration") = 2.0)
      .def_readonly("vocab_size", &ToyModelSpec::vocab_size)
      .def_readonly("model_seed", &ToyModelSpec::model_seed)
      .def_readonly("concentration", &ToyModelSpec::concentration);

  // wm-core
  m.def("majority_bit", [](const std::string& bits) {
    const auto info = majority_bit(to_bits(bits));
    return py::make_tuple(info.lambda, info.h);
  }, py::arg("bits"), "(lambda, h) with ties resolved to lambda = 1");
  m.def("validate_feasible", [](const std::string& message, const WatermarkParams& params) {
    validate_feasible(to_message(message), params);
  }, py::arg("message"), py::arg("params"));
  m.def("split_blocks", [](const std::string& message, std::size_t r) {
    const Message m = to_message(message);
    std::vector<std::string> out;
    for (BitView block : split_blocks(m, r)) {
      std::string s;
      for (Bit bit : block) s.push_back(static_cast<char>('0' + bit));
      out.push_back(std::move(s));
    }
    return out;
  }, py::arg("message"), py::arg("r"));
  m.def("infeasible_code_count", [](std::size_t b, std::size_t r) {
    return to_pyint(infeasible_code_count(b, r));
  }, py::arg("b"), py::arg("r"));
  m.def("gamma_of", [](const std::string& message, std::size_t r) {
    return gamma_of(to_message(message), r);
  }, py::arg("message"), py::arg("r"));

  // keyed partition
  m.def("hash_seed", [](std::uint64_t key, TokenId prev, TokenId prev_prev, Bit lambda,
                        std::optional<std::uint32_t> h) {
    return hash_seed({key, prev, prev_prev, lambda, h});
  }, py::arg("key"), py::arg("prev"), py::arg("prev_prev"), py::arg("lam"),
        py::arg("h") = py::none());
  m.def("permute_vocab", &permute_vocab, py::arg("seed"), py::arg("vocab_size"));
  m.def("shard_of_token", &shard_of_token, py::arg("seed"), py::arg("vocab_size"),
        py::arg("n_shards"), py::arg("token"));
  py::class_<ShardLayout>(m, "ShardLayout")
      .def_property_readonly("n_shards", &ShardLayout::n_shards)
      .def_property_readonly("vocab_size", &ShardLayout::vocab_size)
      .def_property_readonly("permutation", [](const ShardLayout& l) {
        return std::vector<TokenId>(l.permutation().begin(), l.permutation().end());
      })
      .def_property_readonly("boundaries", [](const ShardLayout& l) {
        return std::vector<std::size_t>(l.boundaries().begin(), l.boundaries().end());
      })
      .def("shard_of", &ShardLayout::shard_of, py::arg("token"))
      .def("green_ratio", [](const ShardLayout& l, const std::string& bits, Bit lambda) {
        return green_list(l, to_bits(bits), lambda).ratio();
      }, py::arg("block_bits"), py::arg("lam"));
  m.def("partition", &partition, py::arg("permutation"), py::arg("n_shards"));

  // encoder
  m.def("encode_step", [](const WatermarkParams& params, const std::string& message,
                          TokenId prev, TokenId prev_prev, const std::vector<double>& logits) {
    EncodeStep step = encode_step(params, to_message(message), {prev, prev_prev}, logits);
    return py::make_tuple(step.logits, step.block);
  }, py::arg("params"), py::arg("message"), py::arg("prev"), py::arg("prev_prev"),
        py::arg("logits"));
  m.def("toy_logits", [](const ToyModelSpec& spec, TokenId prev, TokenId prev_prev) {
    return ToyLanguageModel(spec).logits(prev, prev_prev);
  }, py::arg("spec"), py::arg("prev"), py::arg("prev_prev"));
  m.def("generate", [](const WatermarkParams& params, const std::string& message,
                       const TokenSeq& prompt, std::size_t length, std::uint64_t sampler_seed,
                       const ToyModelSpec& spec) {
    const Generation g = generate(ToyLanguageModel(spec).provider(), params,
                                  to_message(message), prompt, length, sampler_seed);
    py::dict out;
    out["tokens"] = g.tokens;
    out["green"] = g.green;
    out["green_fraction"] = g.green_fraction();
    return out;
  }, py::arg("params"), py::arg("message"), py::arg("prompt"), py::arg("length"),
        py::arg("sampler_seed"), py::arg("spec") = ToyModelSpec{});
  m.def("generate_unwatermarked", [](const TokenSeq& prompt, std::size_t length,
                                     std::uint64_t sampler_seed, const ToyModelSpec& spec) {
    return generate_unwatermarked(ToyLanguageModel(spec).provider(), prompt, length, sampler_seed);
  }, py::arg("prompt"), py::arg("length"), py::arg("sampler_seed"),
        py::arg("spec") = ToyModelSpec{});

  // decoder
  m.def("kmeans2", [](const std::vector<std::uint64_t>& counts) {
    return kmeans2(counts).high_cluster();
  }, py::arg("counts"), "Indices of the high-mean cluster");
  m.def("decode", [](const std::vector<TokenSeq>& segments, const WatermarkParams& params) {
    return decode_to_dict(decode(Segments(segments), params));
  }, py::arg("segments"), py::arg("params"));
  m.def("decoding_config_count", &decoding_config_count, py::arg("b"), py::arg("r"));

  // eval
  m.def("bit_accuracy", [](const std::string& a, const std::string& b) {
    return bit_accuracy(to_message(a), to_message(b));
  }, py::arg("truth"), py::arg("decoded"));
  m.def("top5_hit_rate", [](const TokenSeq& text, const TokenSeq& prompt,
                            const ToyModelSpec& spec) { return top5_hit_rate(text, prompt, spec); },
        py::arg("text"), py::arg("prompt"), py::arg("spec") = ToyModelSpec{});
  m.def("surrogate_perplexity", [](const TokenSeq& text, const TokenSeq& prompt,
                                   const ToyModelSpec& spec) {
    return surrogate_perplexity(spec, text, prompt);
  }, py::arg("text"), py::arg("prompt"), py::arg("spec") = ToyModelSpec{});
  m.def("copy_paste_attack", [](const TokenSeq& text, const TokenSeq& filler, double fraction,
                                std::uint64_t seed) {
    AttackResult r = copy_paste_attack(text, filler, fraction, seed);
    return py::make_tuple(r.tokens, r.positions);
  }, py::arg("watermarked"), py::arg("filler"), py::arg("fraction"), py::arg("attack_seed"));
  m.def("expected_gamma_formula", &expected_gamma_formula, py::arg("b"), py::arg("r") = 1);
  m.def("expected_gamma_exact", [](std::size_t d) {
    const Rational q = expected_gamma_exact(d);
    return py::make_tuple(to_pyint(q.num), to_pyint(q.den));
  }, py::arg("d"), "(numerator, denominator) of the exact expectation");
  m.def("monte_carlo_gamma", [](std::size_t b, std::size_t r, std::size_t trials,
                                std::uint64_t seed, bool feasible_only) {
    const GammaEstimate g = monte_carlo_gamma(b, r, trials, seed, feasible_only);
    py::dict out;
    out["mean"] = g.mean;
    out["standard_error"] = g.standard_error;
    out["min"] = g.min;
    out["violations"] = g.violations;
    out["trials"] = g.trials;
    return out;
  }, py::arg("b"), py::arg("r"), py::arg("trials"), py::arg("seed"),
        py::arg("feasible_only") = false);
  m.def("run_experiment_json", [](const std::string& config) {
    const ExperimentReport report = run_experiment(config_from_json(nlohmann::json::parse(config)));
    return to_json(report).dump();
  }, py::arg("config_json"));

  m.attr("__version__") = std::string(library_version());
}
