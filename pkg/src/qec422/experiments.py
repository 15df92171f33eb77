"""Paired coded/uncoded experiment runs and their CSV records.

The unit of work is a random logical-gate sequence executed two ways:
bare on two qubits, and encoded on four (encoder + transversal blocks).
Both runs share the sequence and noise parameters but use independent
derived RNG streams, so any D difference is scheme, not luck of a
shared stream.  One run yields three records: uncoded, coded without
post-selection, coded with post-selection.

Everything is reproducible from (gate_set, L, seed): the sequence, both
circuits, and both sets of counts follow deterministically, which is
what makes CSV files regenerable byte-for-byte (timestamps aside).
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from datetime import datetime, timezone
from enum import Enum

import numpy as np

from .analytics import trace_distance
from .circuits import Circuit, CircuitError
from .code import (
    EncoderVariant,
    LogicalGate,
    LogicalStateLabel,
    build_encoder,
    coded_gate_circuit,
    decode_distribution,
    post_select,
    post_select_distribution,
    uncoded_gate_circuit,
)
from .noise import NoiseParams, derive_seed, insert_coherent_rotation, noisy_counts, noisy_distribution
from .simulator import OutcomeDistribution, ideal_distribution

DEFAULT_SHOTS = 8192
MAX_SEQUENCE_LENGTH = 1000

SCHEME_UNCODED = "uncoded"
SCHEME_CODED_RAW = "coded_raw"
SCHEME_CODED_PS = "coded_ps"


class GateSetId(Enum):
    """Which logical gates a random sequence draws from."""

    REDUCED = "reduced"              # X0, X1, Z0, Z1, CZZZ
    FULL = "full"                    # all six gates
    SINGLE_HHSWAP = "single_hhswap"  # HHSWAP repeated, nothing random

    @property
    def gates(self) -> tuple[LogicalGate, ...]:
        if self is GateSetId.REDUCED:
            return (LogicalGate.X0, LogicalGate.X1, LogicalGate.Z0,
                    LogicalGate.Z1, LogicalGate.CZZZ)
        if self is GateSetId.FULL:
            return tuple(LogicalGate)
        return (LogicalGate.HHSWAP,)

    @classmethod
    def from_str(cls, name: str) -> "GateSetId":
        for member in cls:
            if member.value == name:
                return member
        raise CircuitError(f"unknown gate set {name!r}; choose from "
                           + ", ".join(m.value for m in cls))


@dataclass(frozen=True)
class SequenceSpec:
    """Everything needed to regenerate one random sequence."""

    gate_set: GateSetId
    length: int
    seed: int

    def __post_init__(self):
        if not 1 <= self.length <= MAX_SEQUENCE_LENGTH:
            raise CircuitError(
                f"sequence length must be in [1, {MAX_SEQUENCE_LENGTH}], got {self.length}"
            )


def random_sequence(spec: SequenceSpec) -> list[LogicalGate]:
    """Uniform i.i.d. draw from the gate set; deterministic in spec.seed."""
    gates = spec.gate_set.gates
    if len(gates) == 1:
        return [gates[0]] * spec.length
    rng = np.random.Generator(np.random.Philox(derive_seed(spec.seed, "sequence")))
    picks = rng.integers(0, len(gates), size=spec.length)
    return [gates[int(i)] for i in picks]


def build_pair(sequence: list[LogicalGate]) -> tuple[Circuit, Circuit]:
    """(uncoded 2-qubit circuit, coded 4-qubit circuit) for one sequence."""
    unc_gates = []
    cod_gates = list(build_encoder(LogicalStateLabel.L00,
                                   EncoderVariant.NON_FAULT_TOLERANT).gates)
    for g in sequence:
        unc_gates += uncoded_gate_circuit(g)
        cod_gates += coded_gate_circuit(g)
    return (Circuit(2, unc_gates, [0, 1]), Circuit(4, cod_gates, [0, 1, 2, 3]))


def output_dimension(dist: OutcomeDistribution) -> int:
    """Support size of a distribution; stratifies runs for bound checks."""
    return dist.support_size


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

CSV_COLUMNS = (
    "experiment_id", "gate_set", "L", "seed", "scheme", "shots", "gamma", "r",
    "D", "D_decoded", "output_dimension", "eps1", "eps2", "p_meas", "p_prep",
    "theta", "timestamp",
)

_INT_COLUMNS = {"L", "seed", "shots", "gamma", "output_dimension"}
_FLOAT_COLUMNS = {"r", "D", "D_decoded", "eps1", "eps2", "p_meas", "p_prep", "theta"}


@dataclass
class ExperimentRecord:
    """One CSV row.  Floats are written with repr so they read back
    bit-exactly; gamma is round(r * shots) in analytic-xi runs."""

    experiment_id: str
    gate_set: str
    L: int
    seed: int
    scheme: str
    shots: int
    gamma: int
    r: float
    D: float
    D_decoded: float
    output_dimension: int
    eps1: float
    eps2: float
    p_meas: float
    p_prep: float
    theta: float
    timestamp: str

    def to_csv_row(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append(repr(v) if f.name in _FLOAT_COLUMNS else str(v))
        return out

    @classmethod
    def from_csv_row(cls, row: dict[str, str]) -> "ExperimentRecord":
        kwargs = {}
        for f in fields(cls):
            raw = row[f.name]
            if f.name in _INT_COLUMNS:
                kwargs[f.name] = int(raw)
            elif f.name in _FLOAT_COLUMNS:
                kwargs[f.name] = float(raw)
            else:
                kwargs[f.name] = raw
        return cls(**kwargs)


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def write_records_csv(path: str, records: list[ExperimentRecord],
                      append: bool = True) -> None:
    """Append records, writing the header only when creating the file."""
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    mode = "a" if append and exists else "w"
    with open(path, mode, newline="") as fh:
        writer = csv.writer(fh)
        if mode == "w":
            writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.to_csv_row())


def read_records_csv(path: str) -> list[ExperimentRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise CircuitError(f"unexpected CSV header in {path}: {reader.fieldnames}")
        return [ExperimentRecord.from_csv_row(row) for row in reader]


# ---------------------------------------------------------------------------
# Running pairs
# ---------------------------------------------------------------------------

def run_pair(sequence: list[LogicalGate], params: NoiseParams, shots: int,
             seed: int, gate_set: str = "custom", analytic_xi: bool = False) -> list[ExperimentRecord]:
    """Execute one sequence both ways; returns [uncoded, coded_raw, coded_ps].

    params.theta != 0 inserts the coherent rotation after the coded
    encoder's Hadamard (the uncoded circuit has no encoder and runs
    clean of it).  With analytic_xi the exact xi-mixed distributions
    replace sampling and D carries no shot noise.  When post-selection
    retains nothing (theta = pi), the coded_ps row reports the worst
    case D = 1 with gamma = 0.
    """
    unc, cod = build_pair(sequence)
    ideal_u = ideal_distribution(unc)
    ideal_c = ideal_distribution(cod)
    decoded_ideal = decode_distribution(ideal_c)
    if params.theta != 0.0:
        cod = insert_coherent_rotation(cod, params.theta)
    L = len(sequence)
    stamp = _utc_now()

    if analytic_xi:
        dist_u = noisy_distribution(unc, params)
        dist_c = noisy_distribution(cod, params)
        D_u = trace_distance(ideal_u, dist_u)
        D_raw = trace_distance(ideal_c, dist_c)
        even_mass = sum(p for s, p in dist_c.probs.items() if s.count("1") % 2 == 0)
        if even_mass > 0.0:
            retained, r = post_select_distribution(dist_c)
            D_ps = trace_distance(ideal_c, retained)
            D_dec = trace_distance(decoded_ideal, decode_distribution(retained))
        else:
            r, D_ps, D_dec = 0.0, 1.0, 1.0
        gamma = round(r * shots)
    else:
        counts_u = noisy_counts(unc, params, shots, derive_seed(seed, "uncoded"))
        counts_c = noisy_counts(cod, params, shots, derive_seed(seed, "coded"))
        D_u = trace_distance(ideal_u, counts_u.to_distribution())
        D_raw = trace_distance(ideal_c, counts_c.to_distribution())
        ps = post_select(counts_c)
        r = ps.retention
        gamma = ps.accepted
        if gamma > 0:
            D_ps = trace_distance(ideal_c, ps.retained.to_distribution())
            D_dec = trace_distance(decoded_ideal,
                                   decode_distribution(ps.retained.to_distribution()))
        else:
            D_ps, D_dec = 1.0, 1.0

    def rec(scheme: str, gam: int, rr: float, D: float, D_decoded: float,
            dim: int) -> ExperimentRecord:
        return ExperimentRecord(
            experiment_id=f"{gate_set}-L{L}-s{seed}-{scheme}",
            gate_set=gate_set, L=L, seed=seed, scheme=scheme, shots=shots,
            gamma=gam, r=rr, D=D, D_decoded=D_decoded, output_dimension=dim,
            eps1=params.eps1, eps2=params.eps2, p_meas=params.p_meas,
            p_prep=params.p_prep, theta=params.theta, timestamp=stamp,
        )

    return [
        rec(SCHEME_UNCODED, shots, 1.0, D_u, D_u, ideal_u.support_size),
        rec(SCHEME_CODED_RAW, shots, 1.0, D_raw, D_dec, ideal_c.support_size),
        rec(SCHEME_CODED_PS, gamma, r, D_ps, D_dec, ideal_c.support_size),
    ]


def _run_one(task: tuple) -> list[ExperimentRecord]:
    gate_set, L, k, master_seed, params, shots, analytic_xi = task
    seed = derive_seed(master_seed, gate_set.value, L, k)
    sequence = random_sequence(SequenceSpec(gate_set, L, seed))
    return run_pair(sequence, params, shots, seed, gate_set.value, analytic_xi)


def sweep_L(gate_set: GateSetId, lengths: list[int], params: NoiseParams,
            shots: int = DEFAULT_SHOTS, seeds_per_length: int = 1,
            master_seed: int = 0, analytic_xi: bool = False,
            jobs: int = 1) -> list[ExperimentRecord]:
    """Run seeds_per_length independent pairs at every L.

    Each (L, k) slot gets its own derived seed and its own freshly drawn
    sequence.  With jobs > 1 the pairs run in worker processes; results
    are collected in task order, so the record list (and any CSV written
    from it) does not depend on scheduling.
    """
    tasks = [
        (gate_set, L, k, master_seed, params, shots, analytic_xi)
        for L in lengths for k in range(seeds_per_length)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            groups = list(pool.map(_run_one, tasks))
    else:
        groups = [_run_one(t) for t in tasks]
    return [rec for group in groups for rec in group]


def sweep_theta(thetas: list[float], params: NoiseParams,
                gate_set: GateSetId = GateSetId.SINGLE_HHSWAP, length: int = 1,
                shots: int = DEFAULT_SHOTS, master_seed: int = 0) -> list[ExperimentRecord]:
    """Coherent-rotation sweep: one pair per theta, retention in the r column."""
    out: list[ExperimentRecord] = []
    for i, theta in enumerate(thetas):
        seed = derive_seed(master_seed, "theta", i)
        run_params = NoiseParams(eps1=params.eps1, eps2=params.eps2,
                                 p_meas=params.p_meas, p_prep=params.p_prep,
                                 theta=float(theta), xi=params.xi)
        sequence = random_sequence(SequenceSpec(gate_set, length, seed))
        out += run_pair(sequence, run_params, shots, seed, gate_set.value)
    return out


def summarize_records(records: list[ExperimentRecord]) -> list[dict]:
    """Mean D and r per (L, scheme), sorted by L; feeds the CLI table."""
    groups: dict[tuple[int, str], list[ExperimentRecord]] = {}
    for rec in records:
        groups.setdefault((rec.L, rec.scheme), []).append(rec)
    out = []
    for (L, scheme) in sorted(groups, key=lambda k: (k[0], k[1])):
        rs = groups[(L, scheme)]
        out.append({
            "L": L,
            "scheme": scheme,
            "n": len(rs),
            "mean_D": sum(r.D for r in rs) / len(rs),
            "mean_r": sum(r.r for r in rs) / len(rs),
        })
    return out


# ---------------------------------------------------------------------------
# Hardware coupling constraints
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingMap:
    """Undirected pairs of qubits allowed to share a two-qubit gate."""

    n_qubits: int
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for a, b in self.pairs:
            if a == b or not (0 <= a < self.n_qubits and 0 <= b < self.n_qubits):
                raise CircuitError(f"bad coupling pair ({a}, {b})")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "pairs", frozenset(norm))

    def allows(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.pairs


def linear_chain(n_qubits: int) -> CouplingMap:
    """q0 - q1 - ... - q(n-1), the layout the encoder was drawn for."""
    return CouplingMap(n_qubits, frozenset((i, i + 1) for i in range(n_qubits - 1)))


def validate_coupling(circuit: Circuit, coupling: CouplingMap) -> list[tuple[int, tuple[int, int]]]:
    """Two-qubit gates whose pair the map forbids, as (gate_index, pair)."""
    if circuit.n_qubits > coupling.n_qubits:
        raise CircuitError(
            f"circuit uses {circuit.n_qubits} qubits but the map has {coupling.n_qubits}"
        )
    violations = []
    for i, g in enumerate(circuit.gates):
        if g.kind.arity == 2 and not coupling.allows(*g.targets):
            violations.append((i, g.targets))
    return violations
