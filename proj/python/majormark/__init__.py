# Copyright 2026 The MajorMark Authors
# SPDX-License-Identifier: Apache-2.0
"""Majority-bit-aware multi-bit text watermarking (MajorMark / MajorMark+)."""

import json
from fractions import Fraction

from ._majormark import (  # noqa: F401
    MajorMarkError,
    Scheme,
    ShardLayout,
    ToyModelSpec,
    WatermarkParams,
    __version__,
    bit_accuracy,
    copy_paste_attack,
    decode,
    decoding_config_count,
    encode_step,
    expected_gamma_formula,
    gamma_of,
    generate,
    generate_unwatermarked,
    hash_seed,
    infeasible_code_count,
    kmeans2,
    majority_bit,
    monte_carlo_gamma,
    partition,
    permute_vocab,
    shard_of_token,
    split_blocks,
    surrogate_perplexity,
    top5_hit_rate,
    toy_logits,
    validate_feasible,
)
from ._majormark import expected_gamma_exact as _expected_gamma_exact
from ._majormark import run_experiment_json as _run_experiment_json


def expected_gamma_exact(d):
    """Exact E[max(h, d - h)] / d for h ~ Binomial(d, 1/2) as a Fraction."""
    num, den = _expected_gamma_exact(d)
    return Fraction(num, den)


def run_experiment(config):
    """Runs an experiment from a config dict and returns the report dict."""
    return json.loads(_run_experiment_json(json.dumps(config)))
