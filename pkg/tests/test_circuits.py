"""Circuit types and the text format."""

import numpy as np
import pytest

from qec422.circuits import (
    Circuit,
    CircuitError,
    CircuitParseError,
    GateInstance,
    GateKind,
    parse_circuit,
    serialize_circuit,
)


class TestGateInstance:
    def test_arities(self):
        assert GateKind.H.arity == 1
        assert GateKind.RZ.arity == 1
        assert GateKind.CNOT.arity == 2
        assert GateKind.SWAP.arity == 2

    def test_wrong_arity_rejected(self):
        with pytest.raises(CircuitError):
            GateInstance(GateKind.CNOT, (0,))
        with pytest.raises(CircuitError):
            GateInstance(GateKind.X, (0, 1))

    def test_duplicate_targets_rejected(self):
        with pytest.raises(CircuitError):
            GateInstance(GateKind.CNOT, (2, 2))

    def test_rz_angle_required(self):
        with pytest.raises(CircuitError):
            GateInstance(GateKind.RZ, (0,))
        with pytest.raises(CircuitError):
            GateInstance(GateKind.RZ, (0,), float("nan"))
        GateInstance(GateKind.RZ, (0,), 0.25)

    def test_angle_on_non_rz_rejected(self):
        with pytest.raises(CircuitError):
            GateInstance(GateKind.H, (0,), 1.0)


class TestCircuit:
    def test_target_out_of_range(self):
        with pytest.raises(CircuitError):
            Circuit(2, [GateInstance(GateKind.X, (2,))], [0])

    def test_measured_validation(self):
        with pytest.raises(CircuitError):
            Circuit(2, [], [0, 0])
        with pytest.raises(CircuitError):
            Circuit(2, [], [2])


class TestParser:
    def test_minimal_file(self):
        text = "qubits 5\nH 1\nCNOT 1 0\nMEASURE 0 1 2 3 4\n"
        c = parse_circuit(text)
        assert c.n_qubits == 5
        assert [g.kind for g in c.gates] == [GateKind.H, GateKind.CNOT]
        assert c.measured == [0, 1, 2, 3, 4]

    def test_comments_and_blank_lines(self):
        text = "# header comment\n\nqubits 2\nX 0  # trailing\n\nMEASURE 0 1\n"
        c = parse_circuit(text)
        assert len(c.gates) == 1

    def test_rz_angle(self):
        c = parse_circuit("qubits 1\nRZ 0 -0.75\nMEASURE 0\n")
        assert c.gates[0].angle == -0.75

    def test_missing_header(self):
        with pytest.raises(CircuitParseError) as err:
            parse_circuit("H 0\nMEASURE 0\n")
        assert err.value.line_no == 1

    def test_unknown_gate_names_line(self):
        with pytest.raises(CircuitParseError) as err:
            parse_circuit("qubits 2\nH 0\nCX 0 1\nMEASURE 0\n")
        assert err.value.line_no == 3
        assert "CX" in str(err.value)

    def test_index_out_of_range(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 2\nX 2\nMEASURE 0\n")

    def test_bad_angle(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 1\nRZ 0 abc\nMEASURE 0\n")

    def test_wrong_argument_count(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 2\nCNOT 0\nMEASURE 0\n")

    def test_gate_after_measure_rejected(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 2\nMEASURE 0 1\nX 0\n")

    def test_missing_measure_rejected(self):
        with pytest.raises(CircuitParseError):
            parse_circuit("qubits 2\nX 0\n")


def _random_circuit(rng: np.random.Generator) -> Circuit:
    n = int(rng.integers(1, 7))
    gates = []
    for _ in range(int(rng.integers(0, 31))):
        kind = list(GateKind)[int(rng.integers(0, len(GateKind)))]
        if kind.arity == 2 and n == 1:
            kind = GateKind.X
        targets = tuple(int(q) for q in rng.choice(n, size=kind.arity, replace=False))
        angle = float(rng.normal() * 4) if kind.takes_angle else None
        gates.append(GateInstance(kind, targets, angle))
    k = int(rng.integers(1, n + 1))
    measured = [int(q) for q in rng.choice(n, size=k, replace=False)]
    return Circuit(n, gates, measured)


class TestRoundTrip:
    def test_serialize_parse_identity(self):
        """serialize -> parse reproduces the circuit, including angles."""
        rng = np.random.default_rng(2024)
        for _ in range(100):
            c = _random_circuit(rng)
            text = serialize_circuit(c)
            back = parse_circuit(text)
            assert back == c
            assert serialize_circuit(back) == text
