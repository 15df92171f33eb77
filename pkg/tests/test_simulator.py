"""Statevector engine: gate semantics, conventions, distributions, sampling."""

import numpy as np
import pytest

from qec422.circuits import Circuit, CircuitError, GateInstance, GateKind
from qec422.simulator import (
    OutcomeDistribution,
    PureState,
    ShotCounts,
    apply_gate,
    final_state,
    ideal_distribution,
    sample_counts,
)


def _g(kind, *targets, angle=None):
    return GateInstance(kind, targets, angle)


def _rand_state(rng: np.random.Generator, n: int) -> PureState:
    amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return PureState(n, amp / np.linalg.norm(amp))


class TestConventions:
    def test_qubit0_is_lowest_bit(self):
        """X on qubit 0 of |00> populates index 1, printed '10'."""
        c = Circuit(2, [_g(GateKind.X, 0)], [0, 1])
        assert ideal_distribution(c).probs == {"10": 1.0}

    def test_measured_order_controls_string_order(self):
        c = Circuit(2, [_g(GateKind.X, 0)], [1, 0])
        assert ideal_distribution(c).probs == {"01": 1.0}

    def test_qubit_cap(self):
        with pytest.raises(CircuitError):
            PureState.zero(13)
        PureState.zero(12)

    def test_norm_enforced(self):
        with pytest.raises(CircuitError):
            PureState(1, np.array([1.0, 1.0]))


class TestGateSemantics:
    def test_cnot_truth_table(self):
        # control q1, target q0: |01> (index 2, q1 set) -> |11>
        c = Circuit(2, [_g(GateKind.X, 1), _g(GateKind.CNOT, 1, 0)], [0, 1])
        assert ideal_distribution(c).probs == {"11": 1.0}

    def test_cnot_leaves_control_clear(self):
        c = Circuit(2, [_g(GateKind.X, 0), _g(GateKind.CNOT, 1, 0)], [0, 1])
        assert ideal_distribution(c).probs == {"10": 1.0}

    def test_swap(self):
        c = Circuit(3, [_g(GateKind.X, 0), _g(GateKind.SWAP, 0, 2)], [0, 1, 2])
        assert ideal_distribution(c).probs == {"001": 1.0}

    def test_cz_phase(self):
        state = PureState.zero(2)
        for gate in (_g(GateKind.H, 0), _g(GateKind.X, 1), _g(GateKind.CZ, 0, 1)):
            state = apply_gate(state, gate)
        # |11> picked up a minus sign relative to |01>
        np.testing.assert_allclose(state.amplitudes[2], 1 / np.sqrt(2), atol=1e-12)
        np.testing.assert_allclose(state.amplitudes[3], -1 / np.sqrt(2), atol=1e-12)

    def test_s_phase(self):
        state = apply_gate(apply_gate(PureState.zero(1), _g(GateKind.X, 0)),
                           _g(GateKind.S, 0))
        np.testing.assert_allclose(state.amplitudes[1], 1j, atol=1e-12)

    def test_y_action(self):
        state = apply_gate(PureState.zero(1), _g(GateKind.Y, 0))
        np.testing.assert_allclose(state.amplitudes, [0, 1j], atol=1e-12)

    def test_rz_relative_phase(self):
        theta = 0.8
        state = PureState.zero(1)
        state = apply_gate(state, _g(GateKind.H, 0))
        state = apply_gate(state, _g(GateKind.RZ, 0, angle=theta))
        ratio = state.amplitudes[1] / state.amplitudes[0]
        np.testing.assert_allclose(ratio, np.exp(1j * theta), atol=1e-12)

    def test_single_qubit_gates_match_kron_oracle(self):
        """apply_gate agrees with explicit kron-product matrices on 3 qubits."""
        mats = {
            GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
            GateKind.Y: np.array([[0, -1j], [1j, 0]]),
            GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
            GateKind.H: np.array([[1, 1], [1, -1]]) / np.sqrt(2),
            GateKind.S: np.array([[1, 0], [0, 1j]]),
        }
        rng = np.random.default_rng(5)
        eye = np.eye(2)
        for kind, mat in mats.items():
            for q in range(3):
                state = _rand_state(rng, 3)
                # little-endian kron: qubit 0 is the RIGHTMOST factor
                factors = [eye, eye, eye]
                factors[2 - q] = mat
                big = np.kron(np.kron(factors[0], factors[1]), factors[2])
                got = apply_gate(state, _g(kind, q)).amplitudes
                np.testing.assert_allclose(got, big @ state.amplitudes, atol=1e-12)


class TestAlgebraicProperties:
    def test_involutions(self):
        """X, Y, Z, H, CNOT, CZ, SWAP applied twice restore any state."""
        rng = np.random.default_rng(11)
        twice = [
            _g(GateKind.X, 0), _g(GateKind.Y, 1), _g(GateKind.Z, 2),
            _g(GateKind.H, 0), _g(GateKind.CNOT, 0, 2), _g(GateKind.CZ, 1, 2),
            _g(GateKind.SWAP, 0, 1),
        ]
        for gate in twice:
            state = _rand_state(rng, 3)
            out = apply_gate(apply_gate(state, gate), gate)
            np.testing.assert_allclose(out.amplitudes, state.amplitudes, atol=1e-10)

    def test_rz_composition(self):
        """RZ(a) RZ(b) = RZ(a+b)."""
        rng = np.random.default_rng(12)
        a, b = 0.7, -1.9
        state = _rand_state(rng, 2)
        one = apply_gate(apply_gate(state, _g(GateKind.RZ, 1, angle=a)),
                         _g(GateKind.RZ, 1, angle=b))
        both = apply_gate(state, _g(GateKind.RZ, 1, angle=a + b))
        np.testing.assert_allclose(one.amplitudes, both.amplitudes, atol=1e-12)

    def test_norm_preserved_on_random_circuits(self):
        """Random <= 40-gate circuits keep the norm within 1e-10 throughout."""
        rng = np.random.default_rng(13)
        kinds = list(GateKind)
        for _ in range(25):
            n = int(rng.integers(2, 7))
            state = PureState.zero(n)
            for _ in range(int(rng.integers(1, 41))):
                kind = kinds[int(rng.integers(0, len(kinds)))]
                targets = tuple(int(q) for q in rng.choice(n, size=kind.arity, replace=False))
                angle = float(rng.normal()) if kind.takes_angle else None
                state = apply_gate(state, _g(kind, *targets, angle=angle))
            assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) < 1e-10


class TestDistributions:
    def test_pruning_drops_tiny_mass(self):
        d = OutcomeDistribution({"00": 1.0 - 1e-13, "11": 1e-13})
        assert set(d.probs) == {"00"}

    def test_mass_must_sum_to_one(self):
        with pytest.raises(CircuitError):
            OutcomeDistribution({"0": 0.6, "1": 0.5})

    def test_mixed_widths_rejected(self):
        with pytest.raises(CircuitError):
            OutcomeDistribution({"0": 0.5, "10": 0.5})

    def test_ghz_marginal(self):
        c = Circuit(3, [_g(GateKind.H, 0), _g(GateKind.CNOT, 0, 1),
                        _g(GateKind.CNOT, 1, 2)], [0, 2])
        d = ideal_distribution(c)
        np.testing.assert_allclose(sorted(d.probs.values()), [0.5, 0.5])
        assert set(d.probs) == {"00", "11"}

    def test_unmeasured_circuit_rejected(self):
        with pytest.raises(CircuitError):
            ideal_distribution(Circuit(2, [], []))


class TestSampling:
    def test_counts_sum_to_shots(self):
        d = OutcomeDistribution({"00": 0.25, "01": 0.25, "10": 0.25, "11": 0.25})
        counts = sample_counts(d, 10_000, seed=3)
        assert counts.total == 10_000

    def test_deterministic_for_fixed_seed(self):
        d = OutcomeDistribution({"0": 0.3, "1": 0.7})
        assert sample_counts(d, 5000, 9).counts == sample_counts(d, 5000, 9).counts

    def test_frequencies_track_probabilities(self):
        d = OutcomeDistribution({"0": 0.3, "1": 0.7})
        counts = sample_counts(d, 100_000, 17)
        # 3 sigma of a 0.3 binomial at 1e5 shots
        assert abs(counts.counts["0"] / 100_000 - 0.3) < 3 * np.sqrt(0.3 * 0.7 / 100_000)

    def test_empirical_distribution(self):
        sc = ShotCounts({"00": 75, "11": 25})
        d = sc.to_distribution()
        assert d.probs == {"00": 0.75, "11": 0.25}

    def test_final_state_of_l00_core(self):
        c = Circuit(4, [_g(GateKind.H, 1), _g(GateKind.CNOT, 1, 0),
                        _g(GateKind.CNOT, 1, 2), _g(GateKind.CNOT, 2, 3)], [0, 1, 2, 3])
        amp = final_state(c).amplitudes
        np.testing.assert_allclose(amp[0b0000], 1 / np.sqrt(2), atol=1e-12)
        np.testing.assert_allclose(amp[0b1111], 1 / np.sqrt(2), atol=1e-12)
