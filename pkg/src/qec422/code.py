"""The [[4,2,2]] error-detecting code: states, encoders, gates, decoding.

Two logical qubits live in four physical qubits; every codeword is an
even-parity 4-bit string, so a single bit flip anywhere is caught by
discarding odd-parity outcomes.  Logical operators act transversally
(single-qubit gates only), which is what makes the coded circuits
cheap enough to beat their uncoded versions under two-qubit-dominated
noise.

Decoding is a table lookup on the retained strings:

    0000, 1111 -> 00      1010, 0101 -> 10
    1100, 0011 -> 01      0110, 1001 -> 11

equivalently Q0 = q0 xor q1, Q1 = q0 xor q2.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .circuits import Circuit, CircuitError, GateInstance, GateKind
from .simulator import OutcomeDistribution, ShotCounts

DATA_QUBITS = 4


class LogicalStateLabel(Enum):
    L00 = "L00"
    L01 = "L01"
    L10 = "L10"
    L11 = "L11"
    L0PLUS = "L0plus"          # |0>|+> : superposition over logical 00 and 01
    LPHIPLUS = "LPhiPlus"      # Bell state over the two logical qubits


class EncoderVariant(Enum):
    NON_FAULT_TOLERANT = "NonFaultTolerant"
    ANCILLA_CHECKED = "AncillaChecked"


class LogicalGate(Enum):
    X0 = "X0"
    X1 = "X1"
    Z0 = "Z0"
    Z1 = "Z1"
    CZZZ = "CZZZ"              # controlled-Z followed by Z on both qubits
    HHSWAP = "HHSWAP"          # Hadamard on both qubits followed by SWAP


CODEWORD_STRINGS: dict[LogicalStateLabel, tuple[str, ...]] = {
    LogicalStateLabel.L00: ("0000", "1111"),
    LogicalStateLabel.L01: ("1100", "0011"),
    LogicalStateLabel.L10: ("1010", "0101"),
    LogicalStateLabel.L11: ("0110", "1001"),
    LogicalStateLabel.L0PLUS: ("0000", "1111", "1100", "0011"),
    LogicalStateLabel.LPHIPLUS: ("0000", "1111", "0110", "1001"),
}

DECODE_TABLE: dict[str, str] = {
    "0000": "00", "1111": "00",
    "1100": "01", "0011": "01",
    "1010": "10", "0101": "10",
    "0110": "11", "1001": "11",
}


def codeword_distribution(label: LogicalStateLabel) -> OutcomeDistribution:
    """Ideal measurement distribution of the encoded state."""
    strings = CODEWORD_STRINGS[label]
    return OutcomeDistribution({s: 1.0 / len(strings) for s in strings})


# ---------------------------------------------------------------------------
# Encoders
# ---------------------------------------------------------------------------

def _g(kind: GateKind, *targets: int) -> GateInstance:
    return GateInstance(kind, targets)

def _l00_core() -> list[GateInstance]:
    return [
        _g(GateKind.H, 1),
        _g(GateKind.CNOT, 1, 0),
        _g(GateKind.CNOT, 1, 2),
        _g(GateKind.CNOT, 2, 3),
    ]


def build_encoder(label: LogicalStateLabel, variant: EncoderVariant) -> Circuit:
    """Preparation circuit whose ideal distribution is codeword_distribution(label).

    The AncillaChecked variant exists only for L00: a fifth qubit checks
    q0 xor q3 (0 on every codeword), turning the one fault class the
    plain encoder misses into a flagged event.  Basis-state labels other
    than L00 are prepared as the L00 encoder followed by transversal
    logical X blocks; the two superposition labels have direct two-Bell
    constructions.
    """
    nonft = variant is EncoderVariant.NON_FAULT_TOLERANT
    if not nonft and label is not LogicalStateLabel.L00:
        raise CircuitError(f"AncillaChecked encoder is only defined for L00, got {label.value}")

    if label is LogicalStateLabel.L00:
        if nonft:
            return Circuit(4, _l00_core(), [0, 1, 2, 3])
        gates = _l00_core() + [_g(GateKind.CNOT, 0, 4), _g(GateKind.CNOT, 3, 4)]
        return Circuit(5, gates, [0, 1, 2, 3, 4])
    if label is LogicalStateLabel.L01:
        return Circuit(4, _l00_core() + coded_gate_circuit(LogicalGate.X1), [0, 1, 2, 3])
    if label is LogicalStateLabel.L10:
        return Circuit(4, _l00_core() + coded_gate_circuit(LogicalGate.X0), [0, 1, 2, 3])
    if label is LogicalStateLabel.L11:
        gates = _l00_core() + coded_gate_circuit(LogicalGate.X1) + coded_gate_circuit(LogicalGate.X0)
        return Circuit(4, gates, [0, 1, 2, 3])
    if label is LogicalStateLabel.L0PLUS:
        # Bell pair on (q0,q1) times Bell pair on (q2,q3)
        gates = [_g(GateKind.H, 0), _g(GateKind.CNOT, 0, 1),
                 _g(GateKind.H, 2), _g(GateKind.CNOT, 2, 3)]
        return Circuit(4, gates, [0, 1, 2, 3])
    if label is LogicalStateLabel.LPHIPLUS:
        # Bell pair on (q0,q3) times Bell pair on (q1,q2)
        gates = [_g(GateKind.H, 0), _g(GateKind.CNOT, 0, 3),
                 _g(GateKind.H, 1), _g(GateKind.CNOT, 1, 2)]
        return Circuit(4, gates, [0, 1, 2, 3])
    raise CircuitError(f"unsupported encoder ({label}, {variant})")  # pragma: no cover


# ---------------------------------------------------------------------------
# Logical gate blocks
# ---------------------------------------------------------------------------

def coded_gate_circuit(gate: LogicalGate) -> list[GateInstance]:
    """Transversal realization on the four data qubits."""
    if gate is LogicalGate.X0:
        return [_g(GateKind.X, 0), _g(GateKind.X, 2)]
    if gate is LogicalGate.X1:
        return [_g(GateKind.X, 0), _g(GateKind.X, 1)]
    if gate is LogicalGate.Z0:
        return [_g(GateKind.Z, 0), _g(GateKind.Z, 1)]
    if gate is LogicalGate.Z1:
        return [_g(GateKind.Z, 0), _g(GateKind.Z, 2)]
    if gate is LogicalGate.CZZZ:
        return [_g(GateKind.S, q) for q in range(4)]
    if gate is LogicalGate.HHSWAP:
        return [_g(GateKind.H, q) for q in range(4)]
    raise CircuitError(f"unknown logical gate {gate}")  # pragma: no cover


def coded_cz_only_circuit() -> list[GateInstance]:
    """Plain logical controlled-Z: S on all four qubits, then Z on q1 and q2.

    Kept out of the experiment gate sets, which always pair the
    controlled-Z with Z on both logical qubits (CZZZ).
    """
    return [_g(GateKind.S, q) for q in range(4)] + [_g(GateKind.Z, 1), _g(GateKind.Z, 2)]


def uncoded_gate_circuit(gate: LogicalGate) -> list[GateInstance]:
    """Bare two-qubit realization; SWAP is expanded into three CNOTs."""
    if gate is LogicalGate.X0:
        return [_g(GateKind.X, 0)]
    if gate is LogicalGate.X1:
        return [_g(GateKind.X, 1)]
    if gate is LogicalGate.Z0:
        return [_g(GateKind.Z, 0)]
    if gate is LogicalGate.Z1:
        return [_g(GateKind.Z, 1)]
    if gate is LogicalGate.CZZZ:
        return [_g(GateKind.CZ, 0, 1), _g(GateKind.Z, 0), _g(GateKind.Z, 1)]
    if gate is LogicalGate.HHSWAP:
        return [
            _g(GateKind.H, 0), _g(GateKind.H, 1),
            _g(GateKind.CNOT, 0, 1), _g(GateKind.CNOT, 1, 0), _g(GateKind.CNOT, 0, 1),
        ]
    raise CircuitError(f"unknown logical gate {gate}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Decoding and post-selection
# ---------------------------------------------------------------------------

def decode(bitstring: str, relabel_swap01: bool = False) -> str | None:
    """Map a 4-bit data string to its logical value, or None on odd parity.

    relabel_swap01 reads the string with physical qubits 0 and 1
    exchanged, the virtual-SWAP trick that turns a wire relabeling into
    a logical CNOT at decode time.  Off by default.
    """
    if len(bitstring) != DATA_QUBITS or set(bitstring) - {"0", "1"}:
        raise CircuitError(f"expected a 4-bit string, got {bitstring!r}")
    if relabel_swap01:
        bitstring = bitstring[1] + bitstring[0] + bitstring[2:]
    return DECODE_TABLE.get(bitstring)


def data_parity_even(bitstring: str) -> bool:
    return bitstring[:DATA_QUBITS].count("1") % 2 == 0


@dataclass
class PostSelectionResult:
    """Retained data-qubit counts plus the bookkeeping around the discard."""

    retained: ShotCounts          # 4-bit data strings, all even parity
    raw_total: int                # R
    parity_rejections: int
    ancilla_rejections: int       # 0 unless an ancilla bit was filtered

    @property
    def accepted(self) -> int:
        """gamma, the number of retained shots."""
        return self.retained.total

    @property
    def retention(self) -> float:
        """r = gamma / R."""
        return self.accepted / self.raw_total if self.raw_total else 0.0


def post_select(raw: ShotCounts, ancilla_present: bool = False) -> PostSelectionResult:
    """Discard odd-parity strings; optionally also strings whose ancilla bit is 1.

    Strings carry the data qubits in the first four characters and, when
    ancilla_present, the ancilla outcome as the fifth.  The ancilla
    filter runs after the parity filter, so a string failing both counts
    as a parity rejection.  Retained counts keep only the data bits.
    """
    width = DATA_QUBITS + (1 if ancilla_present else 0)
    retained: dict[str, int] = {}
    parity_rej = 0
    ancilla_rej = 0
    for s, c in raw.counts.items():
        if len(s) != width:
            raise CircuitError(f"expected {width}-bit strings, got {s!r}")
        data = s[:DATA_QUBITS]
        if not data_parity_even(data):
            parity_rej += c
        elif ancilla_present and s[DATA_QUBITS] == "1":
            ancilla_rej += c
        else:
            retained[data] = retained.get(data, 0) + c
    return PostSelectionResult(ShotCounts(retained), raw.total, parity_rej, ancilla_rej)


def post_select_distribution(dist: OutcomeDistribution,
                             ancilla_present: bool = False) -> tuple[OutcomeDistribution, float]:
    """Analytic post-selection: (renormalized retained distribution, retention r)."""
    width = DATA_QUBITS + (1 if ancilla_present else 0)
    if dist.n_bits != width:
        raise CircuitError(f"expected {width}-bit distribution, got {dist.n_bits} bits")
    kept: dict[str, float] = {}
    for s, p in dist.probs.items():
        data = s[:DATA_QUBITS]
        if data_parity_even(data) and not (ancilla_present and s[DATA_QUBITS] == "1"):
            kept[data] = kept.get(data, 0.0) + p
    r = sum(kept.values())
    if r <= 0.0:
        raise CircuitError("post-selection retained no probability mass")
    return OutcomeDistribution({s: p / r for s, p in kept.items()}), r


def decode_counts(retained: ShotCounts, relabel_swap01: bool = False) -> ShotCounts:
    """Aggregate retained 4-bit counts into logical 2-bit counts."""
    out: dict[str, int] = {}
    for s, c in retained.counts.items():
        logical = decode(s, relabel_swap01)
        if logical is None:
            raise CircuitError(f"odd-parity string {s!r} survived post-selection")
        out[logical] = out.get(logical, 0) + c
    return ShotCounts(out)


def decode_distribution(dist: OutcomeDistribution,
                        relabel_swap01: bool = False) -> OutcomeDistribution:
    """Aggregate a 4-bit distribution with even-parity support into logical outcomes."""
    out: dict[str, float] = {}
    for s, p in dist.probs.items():
        logical = decode(s, relabel_swap01)
        if logical is None:
            raise CircuitError(f"cannot decode odd-parity string {s!r}; post-select first")
        out[logical] = out.get(logical, 0.0) + p
    return OutcomeDistribution(out)
