"""Codewords, encoders, transversal gates, decoding, post-selection."""

import numpy as np
import pytest

from qec422.circuits import Circuit, CircuitError, GateInstance, GateKind
from qec422.code import (
    CODEWORD_STRINGS,
    EncoderVariant,
    LogicalGate,
    LogicalStateLabel,
    build_encoder,
    coded_cz_only_circuit,
    coded_gate_circuit,
    codeword_distribution,
    decode,
    decode_distribution,
    post_select,
    post_select_distribution,
    uncoded_gate_circuit,
)
from qec422.simulator import OutcomeDistribution, ShotCounts, ideal_distribution
from qec422.analytics import trace_distance


def _coded_circuit(gates: list[LogicalGate]) -> Circuit:
    enc = build_encoder(LogicalStateLabel.L00, EncoderVariant.NON_FAULT_TOLERANT)
    body = list(enc.gates)
    for g in gates:
        body += coded_gate_circuit(g)
    return Circuit(4, body, [0, 1, 2, 3])


def _uncoded_circuit(gates: list[LogicalGate]) -> Circuit:
    body = []
    for g in gates:
        body += uncoded_gate_circuit(g)
    return Circuit(2, body, [0, 1])


class TestCodewords:
    def test_all_codewords_even_parity(self):
        for strings in CODEWORD_STRINGS.values():
            for s in strings:
                assert s.count("1") % 2 == 0

    def test_basis_codewords_half_half(self):
        d = codeword_distribution(LogicalStateLabel.L01)
        assert d.probs == {"1100": 0.5, "0011": 0.5}

    def test_superposition_codewords_quarter_each(self):
        d = codeword_distribution(LogicalStateLabel.LPHIPLUS)
        assert d.probs == {"0000": 0.25, "1111": 0.25, "0110": 0.25, "1001": 0.25}


class TestEncoders:
    @pytest.mark.parametrize("label", list(LogicalStateLabel))
    def test_encoder_prepares_its_codeword(self, label):
        c = build_encoder(label, EncoderVariant.NON_FAULT_TOLERANT)
        assert c.n_qubits == 4
        got = ideal_distribution(c)
        want = codeword_distribution(label)
        assert trace_distance(got, want) < 1e-12

    def test_ancilla_variant_shape(self):
        c = build_encoder(LogicalStateLabel.L00, EncoderVariant.ANCILLA_CHECKED)
        assert c.n_qubits == 5
        assert c.measured == [0, 1, 2, 3, 4]
        d = ideal_distribution(c)
        # ancilla bit (last) reads 0 on both codeword strings
        assert set(d.probs) == {"00000", "11110"}

    def test_ancilla_variant_only_for_l00(self):
        with pytest.raises(CircuitError):
            build_encoder(LogicalStateLabel.L01, EncoderVariant.ANCILLA_CHECKED)


class TestLogicalGates:
    @pytest.mark.parametrize("gate,expect", [
        (LogicalGate.X0, LogicalStateLabel.L10),
        (LogicalGate.X1, LogicalStateLabel.L01),
        (LogicalGate.Z0, LogicalStateLabel.L00),
        (LogicalGate.Z1, LogicalStateLabel.L00),
        (LogicalGate.CZZZ, LogicalStateLabel.L00),
    ])
    def test_action_on_l00(self, gate, expect):
        d = ideal_distribution(_coded_circuit([gate]))
        assert trace_distance(d, codeword_distribution(expect)) < 1e-12

    def test_hhswap_spreads_over_even_strings(self):
        d = ideal_distribution(_coded_circuit([LogicalGate.HHSWAP]))
        assert d.support_size == 8
        for s, p in d.probs.items():
            assert s.count("1") % 2 == 0
            np.testing.assert_allclose(p, 0.125, atol=1e-12)

    def test_gate_set_closure(self):
        """Coded blocks keep the state inside the even-parity subspace."""
        rng = np.random.default_rng(21)
        gates = list(LogicalGate)
        for _ in range(40):
            seq = [gates[i] for i in rng.integers(0, len(gates), size=6)]
            d = ideal_distribution(_coded_circuit(seq))
            assert all(s.count("1") % 2 == 0 for s in d.probs)

    def test_logical_equivalence_random_sequences(self):
        """Decoded coded ideal = uncoded ideal for random sequences."""
        rng = np.random.default_rng(22)
        gates = list(LogicalGate)
        for _ in range(60):
            seq = [gates[i] for i in rng.integers(0, len(gates), size=int(rng.integers(1, 7)))]
            coded = decode_distribution(ideal_distribution(_coded_circuit(seq)))
            uncoded = ideal_distribution(_uncoded_circuit(seq))
            assert trace_distance(coded, uncoded) < 1e-12

    def test_uncoded_swap_is_three_cnots(self):
        gates = uncoded_gate_circuit(LogicalGate.HHSWAP)
        assert [g.kind for g in gates] == [GateKind.H, GateKind.H,
                                           GateKind.CNOT, GateKind.CNOT, GateKind.CNOT]

    def test_cz_only_variant_is_logical_cz(self):
        """S on all four qubits then Z1 Z2 = controlled-Z without the extra Zs."""
        enc = build_encoder(LogicalStateLabel.L00, EncoderVariant.NON_FAULT_TOLERANT)
        for prep in ([], [LogicalGate.HHSWAP], [LogicalGate.X1, LogicalGate.HHSWAP]):
            unc = _uncoded_circuit(prep)
            unc = Circuit(2, unc.gates + [GateInstance(GateKind.CZ, (0, 1))], [0, 1])
            body = list(enc.gates)
            for g in prep:
                body += coded_gate_circuit(g)
            cod = Circuit(4, body + coded_cz_only_circuit(), [0, 1, 2, 3])
            got = decode_distribution(ideal_distribution(cod))
            want = ideal_distribution(unc)
            assert trace_distance(got, want) < 1e-12


class TestDecode:
    def test_table(self):
        assert decode("0000") == "00"
        assert decode("1111") == "00"
        assert decode("1100") == "01"
        assert decode("0101") == "10"
        assert decode("1001") == "11"

    def test_odd_parity_rejected(self):
        assert decode("1000") is None
        assert decode("0111") is None

    def test_bad_input(self):
        with pytest.raises(CircuitError):
            decode("00")
        with pytest.raises(CircuitError):
            decode("00a0")

    def test_relabel_swap01_is_logical_cnot(self):
        """Reading q0/q1 swapped maps L10 <-> L11 and fixes L00, L01."""
        assert decode("1010", relabel_swap01=True) == "11"
        assert decode("0110", relabel_swap01=True) == "10"
        assert decode("0000", relabel_swap01=True) == "00"
        assert decode("1100", relabel_swap01=True) == "01"


class TestPostSelect:
    def test_parity_filter(self):
        raw = ShotCounts({"0000": 70, "1111": 20, "1000": 7, "1110": 3})
        ps = post_select(raw)
        assert ps.retained.counts == {"0000": 70, "1111": 20}
        assert ps.raw_total == 100
        assert ps.accepted == 90
        assert ps.parity_rejections == 10
        assert ps.ancilla_rejections == 0
        assert ps.retention == 0.9

    def test_ancilla_filter_runs_after_parity(self):
        raw = ShotCounts({"00000": 50, "00001": 30, "10001": 20})
        ps = post_select(raw, ancilla_present=True)
        assert ps.retained.counts == {"0000": 50}
        assert ps.ancilla_rejections == 30
        assert ps.parity_rejections == 20  # odd data parity wins the tally

    def test_width_mismatch_rejected(self):
        with pytest.raises(CircuitError):
            post_select(ShotCounts({"0000": 1}), ancilla_present=True)

    def test_empty_retention(self):
        ps = post_select(ShotCounts({"1000": 5}))
        assert ps.accepted == 0
        assert ps.retention == 0.0

    def test_distribution_version(self):
        d = OutcomeDistribution({"0000": 0.4, "1110": 0.2, "1111": 0.4})
        retained, r = post_select_distribution(d)
        np.testing.assert_allclose(r, 0.8)
        np.testing.assert_allclose(retained.get("0000"), 0.5)
        np.testing.assert_allclose(retained.get("1111"), 0.5)
