"""Desk-scale toolkit for [4,2,2] error-detection experiments.

Simulate small circuits exactly, inject circuit-level noise, post-select
on the code's parity check, and compare measured trace distances against
closed-form error models and worst-case bounds.
"""

from .analytics import (
    block_error,
    measurement_error_coded_ps,
    measurement_error_uncoded,
    predict_coded_ps,
    predict_coded_raw,
    predict_uncoded,
    sequence_error,
    trace_distance,
    worst_case_bound,
)
from .circuits import Circuit, CircuitError, CircuitParseError, GateInstance, GateKind, parse_circuit, serialize_circuit
from .code import (
    EncoderVariant,
    LogicalGate,
    LogicalStateLabel,
    build_encoder,
    codeword_distribution,
    coded_gate_circuit,
    decode,
    post_select,
    uncoded_gate_circuit,
)
from .experiments import (
    ExperimentRecord,
    GateSetId,
    SequenceSpec,
    build_pair,
    random_sequence,
    run_pair,
    sweep_L,
    sweep_theta,
)
from .ftcheck import FaultClassification, FaultSite, FTReport, verify_single_faults
from .noise import NoiseParams, insert_coherent_rotation, noisy_counts, totally_mixed
from .simulator import (
    OutcomeDistribution,
    PureState,
    ShotCounts,
    apply_gate,
    ideal_distribution,
    sample_counts,
)

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitError", "CircuitParseError", "GateInstance", "GateKind",
    "parse_circuit", "serialize_circuit",
    "PureState", "OutcomeDistribution", "ShotCounts",
    "apply_gate", "ideal_distribution", "sample_counts",
    "LogicalStateLabel", "EncoderVariant", "LogicalGate",
    "build_encoder", "codeword_distribution", "coded_gate_circuit",
    "uncoded_gate_circuit", "decode", "post_select",
    "NoiseParams", "noisy_counts", "insert_coherent_rotation", "totally_mixed",
    "trace_distance", "worst_case_bound", "block_error", "sequence_error",
    "measurement_error_uncoded", "measurement_error_coded_ps",
    "predict_uncoded", "predict_coded_raw", "predict_coded_ps",
    "FaultSite", "FaultClassification", "FTReport", "verify_single_faults",
    "GateSetId", "SequenceSpec", "ExperimentRecord",
    "random_sequence", "build_pair", "run_pair", "sweep_L", "sweep_theta",
]
