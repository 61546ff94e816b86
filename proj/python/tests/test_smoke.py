# Copyright 2026 The MajorMark Authors
# SPDX-License-Identifier: Apache-2.0

from fractions import Fraction

import pytest

import majormark as mm


def test_majority_bit_examples():
    assert mm.majority_bit("1101") == (1, 3)
    assert mm.majority_bit("0101") == (1, 2)
    assert mm.majority_bit("0001") == (0, 3)
    with pytest.raises(mm.MajorMarkError):
        mm.majority_bit("")


def test_feasibility_and_counts():
    params = mm.WatermarkParams(scheme="plus", b=4, r=2)
    mm.validate_feasible("1001", params)
    with pytest.raises(mm.MajorMarkError, match="infeasible"):
        mm.validate_feasible("1100", params)
    with pytest.raises(ValueError):
        mm.WatermarkParams(scheme="plus", b=8, r=3)
    assert mm.split_blocks("10010110", 4) == ["10", "01", "01", "10"]
    assert mm.infeasible_code_count(32, 2) == 262140
    assert mm.infeasible_code_count(64, 2) == 2**34 - 4
    assert mm.decoding_config_count(32, 2) == 30


def test_keyed_partition():
    assert mm.hash_seed(15485863, 2, 3, 0) == 92915178
    assert mm.hash_seed(15485863, 0, 0, 1, h=2) == 225
    perm = mm.permute_vocab(1, 10000)
    assert sorted(perm) == list(range(10000))
    layout = mm.partition(mm.permute_vocab(3, 10), 4)
    assert list(layout.boundaries) == [0, 3, 6, 8, 10]
    for token in range(10):
        assert layout.shard_of(token) == mm.shard_of_token(3, 10, 4, token)
    assert mm.partition(mm.permute_vocab(5, 8), 4).green_ratio("1101", 1) == 0.75


def test_encode_decode_roundtrip():
    params = mm.WatermarkParams(scheme="plus", b=32, r=2, delta=4.0)
    message = "10110100111000101101001010011100"
    gen = mm.generate(params, message, [1, 2, 3, 4], 500, 11)
    assert len(gen["tokens"]) == 500
    assert gen["green_fraction"] > 0.5
    result = mm.decode([gen["tokens"]], params)
    assert result["decoded_message"] == message
    assert result["passes_performed"] == 30
    assert mm.bit_accuracy(message, result["decoded_message"]) == 1.0


def test_zero_delta_matches_unwatermarked():
    params = mm.WatermarkParams(b=8, delta=0.0)
    gen = mm.generate(params, "10110100", [7, 8], 200, 3)
    assert gen["tokens"] == mm.generate_unwatermarked([7, 8], 200, 3)
    logits = mm.toy_logits(mm.ToyModelSpec(), 5, 6)
    biased, block = mm.encode_step(params, "10110100", 5, 6, logits)
    assert biased == logits and block == 0


def test_eval_helpers():
    assert mm.kmeans2([9, 8, 1, 2, 8]) == [0, 1, 4]
    tokens, positions = mm.copy_paste_attack(list(range(500)), [9] * 500, 0.1, 42)
    assert len(positions) == 50 and len(tokens) == 500
    assert mm.expected_gamma_exact(8) == Fraction(1304, 2048)
    assert abs(mm.expected_gamma_formula(8) - 0.641047395886939) < 1e-12
    est = mm.monte_carlo_gamma(2, 1, 1000, 1)
    assert est["violations"] == 0 and est["min"] == 0.5


def test_run_experiment_is_deterministic():
    config = {"users": 3, "prompts_per_user": 1, "tokens_per_prompt": 120,
              "params": {"scheme": "majormark", "b": 8, "delta": 6}}
    a = mm.run_experiment(config)
    b = mm.run_experiment(config)
    assert a == b
    assert len(a["users"]) == 3
    assert a["summary"]["bit_accuracy"]["mean"] > 0.9
    assert isinstance(mm.__version__, str)
