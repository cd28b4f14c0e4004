"""Majority-logic decoding of binary locally recoverable codes.

Library + CLI for (r, t) recovery structures, the per-symbol majority-vote
decoder over errors and erasures, exact and exponential failure-probability
analytics, and a reproducible Monte Carlo harness.
"""

from .bounds import (
    BoundValue,
    ParameterError,
    VoteProbs,
    availability_worst_case,
    bec_weight_threshold,
    bsc_weight_threshold,
    chernoff_bit_bound_bsc,
    exact_bit_failure_bec,
    exact_bit_failure_bsc,
    kl_rate,
    union_bler_bound,
    vote_probs,
)
from .channel import ERASED, ChannelSpec, NoisePattern, ReceivedWord, apply, sample
from .code_model import (
    CodeSpec,
    InfeasibleParameters,
    RecoveryStructure,
    build_simplex_structure,
    build_synthetic_structure,
    encode_simplex,
    load_structure,
    save_structure,
    validate_structure,
)
from .mld import FAILED, DecodeOutcome, block_decodes, decode_symbol_erasures, decode_symbol_errors, decode_word, vote
from .montecarlo import (
    AbstractSource,
    BudgetExceeded,
    EstimatorResult,
    ExperimentConfig,
    SimplexSource,
    SyntheticSource,
    estimate_ber,
    estimate_ber_parity_shortcut,
    estimate_bler,
    exhaustive_oracle,
    figure1_experiment,
    figure2_computation,
    weight_sweep,
    wilson_interval,
)

__version__ = "0.1.0"
