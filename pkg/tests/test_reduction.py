"""Unit tests for the region-II partial trace and the closed-form matrices."""

import math

import numpy as np
import pytest

from fermamp.core import states
from fermamp.core.families import get_family
from fermamp.core.fock_basis import DensityMatrix, InvalidStateError, outer, reduced_index
from fermamp.core.reduction import (
    closed_form_reduced,
    compare_reduced,
    reduce_components,
    reduce_rows,
    trace_out_region_II,
)
from fermamp.schema import INV_SQRT2, QUARTER_PI, Family, Ordering, Provenance, StateParams


def oracle(family, params, ordering=Ordering.PHYSICAL):
    return trace_out_region_II(get_family(family).density(params, params.gamma), ordering)


def random_params(rng, family):
    q_r = rng.uniform(INV_SQRT2, 1.0)
    gamma = rng.uniform(0.0, QUARTER_PI)
    if family.is_mixed:
        return StateParams(q_r=q_r, gamma=gamma, fidelity=rng.uniform(0.0, 1.0))
    return StateParams(q_r=q_r, gamma=gamma, alpha=rng.uniform(0.0, math.pi / 2))


CLOSED_FORM_FAMILIES = [Family.PHI_PLUS, Family.PHI_STAR, Family.WERNER, Family.WERNER_LIKE]


class TestTraceOutRegionII:
    """Tests for the oracle partial trace."""

    def test_inertial_bell_state(self):
        """Phi+(pi/4) at gamma = 0, q_R = 1 reduces to the Bell state on |000>, |110>."""
        reduced = trace_out_region_II(outer(states.phi_plus(QUARTER_PI, 0.0, 1.0)))
        expected = np.zeros((8, 8))
        for i in (reduced_index("000"), reduced_index("110")):
            for j in (reduced_index("000"), reduced_index("110")):
                expected[i, j] = 0.5
        np.testing.assert_allclose(reduced.entries, expected, atol=1e-15)
        assert reduced.provenance == Provenance.ORACLE

    def test_vacuum_at_infinite_acceleration(self):
        """|0> x |0_U>(pi/4) reduces to diag(1/4) on |000>..|011>."""
        zero = np.zeros((1, 16))
        row = states.lift(1.0, states.vacuum_rows(QUARTER_PI), 0.0, zero)[0]
        reduced = trace_out_region_II(outer(row))
        np.testing.assert_allclose(reduced.entries, np.diag([0.25] * 4 + [0.0] * 4), atol=1e-15)

    def test_preserves_trace_and_positivity(self):
        """The trace is exact and no negative eigenvalue appears."""
        rng = np.random.default_rng(7)
        for family in Family:
            reduced = oracle(family, random_params(rng, family))
            assert abs(np.trace(reduced.entries) - 1.0) <= 1e-14
            assert np.linalg.eigvalsh(reduced.entries)[0] >= -1e-10

    def test_pure_states_at_rest_have_rank_two(self):
        """No Rindler excitation is populated at gamma = 0."""
        for family in (Family.PHI_PLUS, Family.PHI_MINUS, Family.PHI_STAR):
            params = StateParams(q_r=0.8, alpha=0.6, gamma=0.0)
            eigenvalues = np.sort(np.linalg.eigvalsh(oracle(family, params).entries))[::-1]
            assert eigenvalues[2] <= 1e-10

    def test_linear_in_mixtures(self):
        """Tracing a mixture equals mixing the traced components."""
        params = StateParams(q_r=0.75, fidelity=0.4, gamma=0.5)
        components = get_family("werner").components(params, [params.gamma])
        whole = trace_out_region_II(states.mixture_of(components)).entries
        parts = sum(w * trace_out_region_II(outer(rows[0])).entries for w, rows in components)
        np.testing.assert_allclose(whole, parts, atol=1e-13)

    def test_batched_rows_match_scalar_trace(self):
        """reduce_rows agrees with the validated 32-dim route."""
        gammas = np.linspace(0.0, QUARTER_PI, 5)
        params = StateParams(q_r=0.8, fidelity=0.55)
        batched = reduce_components(get_family("werner_like").components(params, gammas))
        for k, gamma in enumerate(gammas):
            scalar = trace_out_region_II(get_family("werner_like").density(params, gamma))
            np.testing.assert_allclose(batched[k], scalar.entries, atol=1e-14)

    def test_fermionic_sign_depends_on_ordering(self):
        """|011><110| is positive in physical ordering and flips in product ordering."""
        params = StateParams(q_r=0.8, alpha=0.6, gamma=0.5)
        physical = oracle(Family.PHI_PLUS, params, Ordering.PHYSICAL).element("011", "110")
        product = oracle(Family.PHI_PLUS, params, Ordering.PRODUCT).element("011", "110")
        expected = 0.6 / 2 * math.sin(1.2) * math.sin(0.5) ** 3
        assert physical == pytest.approx(expected, abs=1e-14)
        assert product == pytest.approx(-expected, abs=1e-14)

    def test_rejects_reduced_input(self):
        """Only 32-dim density matrices can be traced."""
        with pytest.raises(InvalidStateError):
            trace_out_region_II(DensityMatrix(entries=np.eye(8) / 8))

    def test_rejects_invalid_raw_matrix(self):
        """Raw arrays are validated before tracing."""
        with pytest.raises(InvalidStateError):
            trace_out_region_II(np.eye(32))

    def test_reduce_rows_shape(self):
        """(G, 32) amplitude rows give (G, 8, 8) matrices."""
        rows = states.phi_plus_rows(0.4, np.linspace(0, QUARTER_PI, 3), 0.9)
        assert reduce_rows(rows).shape == (3, 8, 8)


class TestClosedFormReduced:
    """Tests for the closed-form reduced matrices."""

    def test_phi_plus_inertial_limit(self):
        """At gamma = 0, q_R = 1 the closed form is the Bell reduction."""
        closed = closed_form_reduced("phi_plus", StateParams(q_r=1.0, alpha=QUARTER_PI, gamma=0.0))
        direct = trace_out_region_II(outer(states.phi_plus(QUARTER_PI, 0.0, 1.0)))
        assert compare_reduced(closed, direct) <= 1e-15

    def test_werner_full_fidelity_is_phi_plus(self):
        """F = 1 Werner equals Phi+(pi/4)."""
        werner = closed_form_reduced("werner", StateParams(q_r=0.8, fidelity=1.0, gamma=0.35))
        phi = closed_form_reduced("phi_plus", StateParams(q_r=0.8, alpha=QUARTER_PI, gamma=0.35))
        assert compare_reduced(werner, phi) <= 1e-15

    def test_worked_examples_match_oracle(self):
        """Phi+(0.6, 0.3, 0.8) and Phi*(0.653, 0.5, 1/sqrt(2)) agree entrywise."""
        for family, params in (
            (Family.PHI_PLUS, StateParams(q_r=0.8, alpha=0.6, gamma=0.3)),
            (Family.PHI_STAR, StateParams(q_r=INV_SQRT2, alpha=0.653, gamma=0.5)),
        ):
            assert compare_reduced(oracle(family, params), closed_form_reduced(family, params)) <= 1e-12

    @pytest.mark.parametrize("family", CLOSED_FORM_FAMILIES)
    @pytest.mark.parametrize("ordering", [Ordering.PHYSICAL, Ordering.PRODUCT])
    def test_random_draws_match_oracle(self, family, ordering):
        """Oracle and corrected closed form agree within 1e-12 on 1000 draws."""
        rng = np.random.default_rng(2011)
        worst = 0.0
        for _ in range(1000):
            params = random_params(rng, family)
            worst = max(worst, compare_reduced(oracle(family, params, ordering), closed_form_reduced(family, params, ordering)))
        assert worst <= 1e-12

    def test_corrections_are_flagged(self):
        """Corrected entries are recorded on the result."""
        params = StateParams(q_r=0.8, alpha=0.6, gamma=0.3)
        phi_plus = closed_form_reduced("phi_plus", params)
        phi_star = closed_form_reduced("phi_star", params)
        werner = closed_form_reduced("werner", StateParams(q_r=0.8, fidelity=0.5, gamma=0.3))
        assert [c.entry for c in phi_plus.corrections] == ["|110><110|"]
        assert {c.entry for c in phi_star.corrections} == {"|010><010|", "|000><011|"}
        assert werner.corrections == []
        assert phi_plus.provenance == Provenance.CLOSED_FORM

    def test_printed_matrix_exhibits_typo(self):
        """The printed Phi+ |110><110| entry misses the oracle at gamma = 0."""
        params = StateParams(q_r=0.8, alpha=QUARTER_PI, gamma=0.0)
        printed = closed_form_reduced("phi_plus", params, printed=True)
        traced = oracle(Family.PHI_PLUS, params)
        assert printed.provenance == Provenance.PRINTED
        assert printed.element("110", "110") == pytest.approx(0.18)
        assert traced.element("110", "110") == pytest.approx(0.32)
        assert compare_reduced(printed, traced) == pytest.approx(0.14)

    @pytest.mark.parametrize("alpha,gamma", [(0.5621, 0.2), (QUARTER_PI, 0.6), (0.3, QUARTER_PI)])
    def test_printed_phi_plus_exact_at_equal_weights(self, alpha, gamma):
        """At q_R = q_L the printed Phi+ matrix equals the oracle."""
        params = StateParams(q_r=INV_SQRT2, alpha=alpha, gamma=gamma)
        printed = closed_form_reduced("phi_plus", params, printed=True)
        assert compare_reduced(printed, oracle(Family.PHI_PLUS, params)) <= 1e-12

    def test_phi_minus_has_no_closed_form(self):
        """phi_minus is oracle-only."""
        with pytest.raises(ValueError):
            closed_form_reduced("phi_minus", StateParams(q_r=1.0, alpha=0.3, gamma=0.1))

    def test_requires_gamma(self):
        """Closed forms are evaluated at one gamma."""
        with pytest.raises(ValueError):
            closed_form_reduced("phi_plus", StateParams(q_r=1.0, alpha=0.3))

    def test_printed_requires_physical_ordering(self):
        """The published matrices are in physical ordering."""
        with pytest.raises(ValueError):
            closed_form_reduced(
                "phi_plus", StateParams(q_r=1.0, alpha=0.3, gamma=0.1), Ordering.PRODUCT, printed=True
            )


class TestCompareReduced:
    """Tests for compare_reduced."""

    def test_identical_states(self):
        """A state compared with itself gives 0."""
        reduced = oracle(Family.WERNER, StateParams(q_r=0.9, fidelity=0.7, gamma=0.2))
        assert compare_reduced(reduced, reduced) == 0.0
