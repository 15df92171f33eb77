"""Exhaustive single-fault verification.

A circuit is fault tolerant in the error-detection sense if no single
gate fault can change the post-selected outcome distribution without
being flagged.  The check enumerates every fault site (3 Paulis after
each one-qubit gate, 15 after each two-qubit gate, optionally an X
before the circuit on each qubit), simulates each faulted circuit
exactly, and classifies the result:

Harmless                  retained distribution and retention both unchanged
DetectedPostSelection     probability mass moved into odd-parity strings
DetectedAncilla           mass flagged only by the ancilla read-out bit
UndetectedLogicalError    retained distribution changed; nothing flagged it

Each one-qubit site fires with probability eps1/3 and each two-qubit
site with eps2/15, so the report totals undetected weight in those
units; the non-fault-tolerant L00 encoder comes out at 8 * eps2 / 15.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, CircuitError, GateInstance, GateKind
from .code import DATA_QUBITS
from .noise import ONE_QUBIT_PAULIS, TWO_QUBIT_PAULIS, _config_marginal
from .simulator import marginal_vector, final_state

DETECTION_MODES = ("postselect", "postselect+ancilla")
_ATOL = 1e-9


class FaultClassification:
    HARMLESS = "Harmless"
    DETECTED_POSTSELECTION = "DetectedPostSelection"
    DETECTED_ANCILLA = "DetectedAncilla"
    UNDETECTED_LOGICAL_ERROR = "UndetectedLogicalError"


@dataclass(frozen=True)
class FaultSite:
    """One Pauli fault location: after gate gate_index, or a preparation
    X flip when gate_index is -1."""

    gate_index: int
    targets: tuple[int, ...]
    pauli: str

    @property
    def is_preparation(self) -> bool:
        return self.gate_index == -1

    @property
    def weight_units(self) -> str:
        """Which per-site probability this site carries."""
        if self.is_preparation:
            return "p_prep"
        return "eps1/3" if len(self.pauli) == 1 else "eps2/15"


def enumerate_single_faults(circuit: Circuit, include_preparation: bool = False,
                            gate_range: tuple[int, int] | None = None) -> list[FaultSite]:
    """All single-fault sites, in circuit order.

    gate_range=(a, b) restricts to gates a <= i < b, for checking a gate
    block appended to an already-verified preparation.
    """
    lo, hi = gate_range if gate_range is not None else (0, len(circuit.gates))
    if not 0 <= lo <= hi <= len(circuit.gates):
        raise CircuitError(f"gate_range {gate_range} out of bounds")
    sites: list[FaultSite] = []
    if include_preparation:
        for q in range(circuit.n_qubits):
            sites.append(FaultSite(-1, (q,), "X"))
    for i in range(lo, hi):
        g = circuit.gates[i]
        labels = ONE_QUBIT_PAULIS if g.kind.arity == 1 else TWO_QUBIT_PAULIS
        for pauli in labels:
            sites.append(FaultSite(i, g.targets, pauli))
    return sites


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def _selection_split(vec: np.ndarray, n_bits: int, ancilla_bit: int | None):
    """Split a marginal vector into (retained data vector, parity-rejected
    mass, ancilla-rejected mass).  Data bits are the first DATA_QUBITS
    read-out bits; ancilla_bit indexes into the read-out string."""
    retained = np.zeros(1 << DATA_QUBITS)
    parity_rej = 0.0
    ancilla_rej = 0.0
    for j, p in enumerate(vec):
        if p == 0.0:
            continue
        data = j & ((1 << DATA_QUBITS) - 1)
        if bin(data).count("1") % 2:
            parity_rej += p
        elif ancilla_bit is not None and (j >> ancilla_bit) & 1:
            ancilla_rej += p
        else:
            retained[data] += p
    return retained, parity_rej, ancilla_rej


def _faulted_marginal(circuit: Circuit, site: FaultSite | None) -> np.ndarray:
    if site is None:
        return marginal_vector(final_state(circuit).probabilities(),
                               circuit.n_qubits, circuit.measured)
    gate_faults = np.zeros(len(circuit.gates), dtype=np.int64)
    prep_mask = 0
    if site.is_preparation:
        prep_mask = 1 << site.targets[0]
    else:
        if not 0 <= site.gate_index < len(circuit.gates):
            raise CircuitError(f"site gate_index {site.gate_index} out of range")
        g = circuit.gates[site.gate_index]
        labels = ONE_QUBIT_PAULIS if g.kind.arity == 1 else TWO_QUBIT_PAULIS
        if site.pauli not in labels or site.targets != g.targets:
            raise CircuitError(f"site {site} does not match gate {site.gate_index}")
        gate_faults[site.gate_index] = labels.index(site.pauli) + 1
    return _config_marginal(circuit, prep_mask, gate_faults)


def classify_fault(circuit: Circuit, site: FaultSite, detection: str,
                   ancilla_qubit: int | None = None) -> str:
    """Classify one fault site under the given detection mode.

    detection is "postselect" (data-parity discard only) or
    "postselect+ancilla" (also require the ancilla read-out bit to be 0;
    defaults to the last measured qubit when ancilla_qubit is None).
    """
    if detection not in DETECTION_MODES:
        raise CircuitError(f"detection must be one of {DETECTION_MODES}, got {detection!r}")
    n_bits = len(circuit.measured)
    if n_bits < DATA_QUBITS:
        raise CircuitError("detection needs at least the four data qubits measured")
    ancilla_bit = None
    if detection == "postselect+ancilla":
        anc = circuit.measured[-1] if ancilla_qubit is None else ancilla_qubit
        if anc not in circuit.measured:
            raise CircuitError(f"ancilla qubit {anc} is not measured")
        ancilla_bit = circuit.measured.index(anc)
        if ancilla_bit < DATA_QUBITS:
            raise CircuitError("ancilla bit cannot be one of the four data bits")

    ideal = _faulted_marginal(circuit, None)
    faulted = _faulted_marginal(circuit, site)
    ideal_ret, ideal_par, ideal_anc = _selection_split(ideal, n_bits, ancilla_bit)
    ret, par, anc = _selection_split(faulted, n_bits, ancilla_bit)

    ideal_mass = ideal_ret.sum()
    mass = ret.sum()
    if ideal_mass <= _ATOL:
        raise CircuitError("ideal circuit retains no probability mass")

    # a changed retained distribution that still reaches the decoder is
    # exactly what detection is supposed to prevent
    if mass > _ATOL and np.max(np.abs(ret / mass - ideal_ret / ideal_mass)) > _ATOL:
        return FaultClassification.UNDETECTED_LOGICAL_ERROR
    if abs(mass - ideal_mass) <= _ATOL:
        return FaultClassification.HARMLESS
    if par > ideal_par + _ATOL:
        return FaultClassification.DETECTED_POSTSELECTION
    return FaultClassification.DETECTED_ANCILLA


# ---------------------------------------------------------------------------
# Whole-circuit report
# ---------------------------------------------------------------------------

@dataclass
class FTReport:
    """Classification of every enumerated site plus the aggregate verdict."""

    circuit_id: str
    detection: str
    classifications: list[tuple[FaultSite, str]]

    @property
    def fault_tolerant(self) -> bool:
        return not any(c == FaultClassification.UNDETECTED_LOGICAL_ERROR
                       for _, c in self.classifications)

    def undetected_sites(self) -> list[FaultSite]:
        return [s for s, c in self.classifications
                if c == FaultClassification.UNDETECTED_LOGICAL_ERROR]

    def undetected_counts(self) -> dict[str, int]:
        """Undetected site tallies keyed by their weight units."""
        out = {"eps1/3": 0, "eps2/15": 0, "p_prep": 0}
        for s in self.undetected_sites():
            out[s.weight_units] += 1
        return out

    def undetected_fraction(self, eps1: float, eps2: float, p_prep: float = 0.0) -> float:
        """First-order undetected-error weight at the given fault rates."""
        n = self.undetected_counts()
        return n["eps1/3"] * eps1 / 3.0 + n["eps2/15"] * eps2 / 15.0 + n["p_prep"] * p_prep

    def undetected_fraction_text(self) -> str:
        n = self.undetected_counts()
        parts = []
        if n["eps1/3"]:
            parts.append(f"{n['eps1/3']}/3 * eps1")
        if n["eps2/15"]:
            parts.append(f"{n['eps2/15']}/15 * eps2")
        if n["p_prep"]:
            parts.append(f"{n['p_prep']} * p_prep")
        return " + ".join(parts) if parts else "0"

    def tally(self) -> dict[str, int]:
        out = {c: 0 for c in (FaultClassification.HARMLESS,
                              FaultClassification.DETECTED_POSTSELECTION,
                              FaultClassification.DETECTED_ANCILLA,
                              FaultClassification.UNDETECTED_LOGICAL_ERROR)}
        for _, c in self.classifications:
            out[c] += 1
        return out

    def to_json_dict(self) -> dict:
        return {
            "circuit_id": self.circuit_id,
            "detection": self.detection,
            "fault_tolerant": self.fault_tolerant,
            "n_sites": len(self.classifications),
            "tally": self.tally(),
            "undetected_fraction": self.undetected_fraction_text(),
            "sites": [
                {
                    "gate_index": s.gate_index,
                    "targets": list(s.targets),
                    "pauli": s.pauli,
                    "classification": c,
                }
                for s, c in self.classifications
            ],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    def format_table(self) -> str:
        lines = [
            f"circuit: {self.circuit_id}   detection: {self.detection}",
            f"{'site':>6} {'gate':>6} {'targets':>9} {'pauli':>5}  classification",
        ]
        for k, (s, c) in enumerate(self.classifications):
            gate = "prep" if s.is_preparation else str(s.gate_index)
            tgt = ",".join(map(str, s.targets))
            lines.append(f"{k:>6} {gate:>6} {tgt:>9} {s.pauli:>5}  {c}")
        t = self.tally()
        lines.append(
            f"total {len(self.classifications)} sites: "
            + ", ".join(f"{v} {k}" for k, v in t.items())
        )
        lines.append(f"undetected weight: {self.undetected_fraction_text()}")
        lines.append(f"fault tolerant: {'yes' if self.fault_tolerant else 'no'}")
        return "\n".join(lines)


def verify_single_faults(circuit: Circuit, detection: str, circuit_id: str = "circuit",
                         include_preparation: bool = False,
                         gate_range: tuple[int, int] | None = None,
                         ancilla_qubit: int | None = None) -> FTReport:
    """Classify every single-fault site of the circuit; the verdict is
    fault_tolerant iff no site is an undetected logical error."""
    sites = enumerate_single_faults(circuit, include_preparation, gate_range)
    classifications = [
        (s, classify_fault(circuit, s, detection, ancilla_qubit)) for s in sites
    ]
    return FTReport(circuit_id, detection, classifications)
