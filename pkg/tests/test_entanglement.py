"""Unit tests for the partial transpose, eigensolver and negativity."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.stats import ortho_group

from fermamp.core import states
from fermamp.core.analysis import evaluate
from fermamp.core.families import get_family
from fermamp.core.entanglement import (
    eigenvalues_symmetric,
    inertial_negativity,
    negativity,
    negativity_batch,
    partial_transpose_alice,
)
from fermamp.core.fock_basis import DensityMatrix, outer
from fermamp.core.reduction import reduce_rows, trace_out_region_II
from fermamp.schema import INV_SQRT2, QUARTER_PI, Family, StateParams


def bell_reduced():
    return trace_out_region_II(outer(states.phi_plus(QUARTER_PI, 0.0, 1.0)))


class TestPartialTranspose:
    """Tests for partial_transpose_alice."""

    def test_swaps_alice_indices(self):
        """out[(a,b),(a',b')] = in[(a',b),(a,b')]."""
        rng = np.random.default_rng(3)
        matrix = rng.normal(size=(8, 8))
        transposed = partial_transpose_alice(matrix)
        for a in range(2):
            for b in range(4):
                for a2 in range(2):
                    for b2 in range(4):
                        assert transposed[a * 4 + b, a2 * 4 + b2] == matrix[a2 * 4 + b, a * 4 + b2]

    def test_is_involution_and_keeps_trace(self):
        """Transposing twice is the identity and the trace is unchanged."""
        entries = bell_reduced().entries
        transposed = partial_transpose_alice(entries)
        np.testing.assert_array_equal(partial_transpose_alice(transposed), entries)
        assert np.trace(transposed) == pytest.approx(1.0)
        np.testing.assert_array_equal(transposed, transposed.T)

    def test_batched_input(self):
        """Stacks of matrices are transposed independently."""
        stack = np.stack([bell_reduced().entries, np.eye(8) / 8])
        transposed = partial_transpose_alice(stack)
        np.testing.assert_array_equal(transposed[0], partial_transpose_alice(stack[0]))
        np.testing.assert_array_equal(transposed[1], np.eye(8) / 8)

    def test_rejects_wrong_shape(self):
        """Only 8x8 blocks are split as 2 x 4."""
        with pytest.raises(ValueError):
            partial_transpose_alice(np.eye(4))


class TestEigenvaluesSymmetric:
    """Tests for the symmetric eigensolver and its residual contract."""

    def test_recovers_known_spectrum(self):
        """Q diag(l) Q^T returns l within 1e-10."""
        expected = np.linspace(-0.3, 0.6, 8)
        q = ortho_group.rvs(8, random_state=11)
        matrix = q @ np.diag(expected) @ q.T
        matrix = (matrix + matrix.T) / 2
        spectrum = eigenvalues_symmetric(matrix)
        np.testing.assert_allclose(spectrum.eigenvalues, expected, atol=1e-10)
        assert spectrum.residual <= 1e-10

    def test_eigenvalues_are_roots_of_characteristic_polynomial(self):
        """Each eigenvalue matches a root of det(A - l I) found by bracketing."""
        expected = np.linspace(-0.35, 0.7, 8)
        q = ortho_group.rvs(8, random_state=5)
        matrix = q @ np.diag(expected) @ q.T
        matrix = (matrix + matrix.T) / 2
        spectrum = eigenvalues_symmetric(matrix)

        def characteristic(x):
            return np.linalg.det(matrix - x * np.eye(8))

        for value in spectrum.eigenvalues:
            root = brentq(characteristic, value - 0.05, value + 0.05, xtol=1e-14)
            assert value == pytest.approx(root, abs=1e-10)

    def test_rejects_asymmetric(self):
        """Input must be symmetric within 1e-12."""
        matrix = np.eye(8)
        matrix[0, 1] = 1e-6
        with pytest.raises(ValueError):
            eigenvalues_symmetric(matrix)

    def test_rejects_non_square(self):
        """Input must be square."""
        with pytest.raises(ValueError):
            eigenvalues_symmetric(np.zeros((2, 3)))


class TestNegativity:
    """Tests for negativity."""

    def test_bell_state(self):
        """A two-qubit Bell state has negativity 1/2."""
        assert negativity(bell_reduced()) == pytest.approx(0.5, abs=1e-12)

    def test_product_state_is_zero(self):
        """Separable states give exactly 0, not rounding noise."""
        reduced = DensityMatrix(entries=np.eye(8) / 8)
        assert negativity(reduced) == 0.0

    def test_accepts_raw_density_matrix(self):
        """DensityMatrix inputs are accepted alongside ReducedState."""
        assert negativity(bell_reduced().rho) == pytest.approx(0.5, abs=1e-12)

    def test_batch_matches_scalar(self):
        """negativity_batch equals negativity row by row."""
        gammas = np.linspace(0.0, QUARTER_PI, 9)
        reduced = reduce_rows(states.phi_star_rows(0.653, gammas, INV_SQRT2))
        values = negativity_batch(reduced)
        for k in range(len(gammas)):
            assert values[k] == pytest.approx(negativity(reduced[k]), abs=1e-12)

    def test_invariant_under_swapping_bob_modes(self):
        """Relabeling p <-> m is local on Bob and keeps the negativity."""
        swap = [a * 4 + m * 2 + p for a in range(2) for p in range(2) for m in range(2)]
        rng = np.random.default_rng(19)
        for family in Family:
            params = StateParams(
                q_r=rng.uniform(0.0, 1.0), gamma=rng.uniform(0.0, QUARTER_PI),
                alpha=rng.uniform(0.0, math.pi / 2), fidelity=rng.uniform(0.0, 1.0),
            )
            reduced = trace_out_region_II(get_family(family).density(params, params.gamma))
            swapped = DensityMatrix(entries=reduced.entries[np.ix_(swap, swap)])
            assert negativity(swapped) == pytest.approx(negativity(reduced), abs=1e-12)

    @pytest.mark.parametrize("fidelity", [0.0, 0.2, 1.0 / 3.0])
    def test_werner_separable_at_rest(self, fidelity):
        """At q_R = 1 and gamma = 0 Werner states with F <= 1/3 are PPT."""
        value = evaluate(Family.WERNER, StateParams(q_r=1.0, fidelity=fidelity), [0.0])[0]
        assert value == 0.0

    @pytest.mark.parametrize("fidelity", [1.0 / 3.0 + 1e-5, 0.5, 0.8, 1.0])
    def test_werner_entangled_at_rest(self, fidelity):
        """Above F = 1/3 the rest-frame negativity is (3F - 1)/4."""
        value = evaluate(Family.WERNER, StateParams(q_r=1.0, fidelity=fidelity), [0.0])[0]
        assert value > 0.0
        assert value == pytest.approx((3 * fidelity - 1) / 4, abs=1e-10)


class TestInertialNegativity:
    """Tests for the gamma = 0 closed form of the pure families."""

    @pytest.mark.parametrize("family", [Family.PHI_PLUS, Family.PHI_MINUS, Family.PHI_STAR])
    def test_single_mode_is_half_sin_two_alpha(self, family):
        """At q_R = 1 the inertial negativity is 1/2 sin 2 alpha."""
        for alpha in np.linspace(0.0, math.pi / 2, 50):
            params = StateParams(q_r=1.0, alpha=float(alpha))
            oracle = evaluate(family, params, [0.0])[0]
            assert oracle == pytest.approx(0.5 * math.sin(2 * alpha), abs=1e-10)
            assert inertial_negativity(family, params) == pytest.approx(oracle, abs=1e-10)

    @pytest.mark.parametrize("family", [Family.PHI_PLUS, Family.PHI_MINUS, Family.PHI_STAR])
    def test_matches_oracle_over_q_r(self, family):
        """Closed form and oracle agree for q_R below 1."""
        for alpha in np.linspace(0.0, math.pi / 2, 50):
            for q_r in np.linspace(INV_SQRT2, 1.0, 5):
                params = StateParams(q_r=float(q_r), alpha=float(alpha))
                oracle = evaluate(family, params, [0.0])[0]
                assert inertial_negativity(family, params) == pytest.approx(oracle, abs=1e-10)

    def test_left_weight_lowers_rest_entanglement(self):
        """Phi+(pi/4) at q_R = 1/sqrt(2) starts at 1/4, not 1/2."""
        params = StateParams(q_r=INV_SQRT2, alpha=QUARTER_PI)
        assert inertial_negativity(Family.PHI_PLUS, params) == pytest.approx(0.25, abs=1e-12)

    def test_rejects_mixed_family(self):
        """Mixed families go through the oracle."""
        with pytest.raises(ValueError):
            inertial_negativity(Family.WERNER, StateParams(q_r=1.0, fidelity=0.5))
