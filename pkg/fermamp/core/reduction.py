"""Bob region-I reduced states.

Two independent routes produce the 8x8 matrix over |a p m>:

* the oracle: partial trace of the 32-dim state over the region-II modes
  (q, n), after reordering |a p q m n> to |a p m>|q n>;
* closed forms: the derived matrices written out entry by entry, with the
  misprints of the published expressions corrected and flagged.

The oracle is canonical; closed forms exist to cross-check it.
"""

import logging
import math
from typing import Callable, Dict, List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..schema import Correction, Family, Ordering, Provenance, StateParams
from .fock_basis import (
    JOINT_DIM,
    REDUCED_DIM,
    DensityMatrix,
    InvalidStateError,
    check_density,
    reduced_index,
    reorder_signs,
)


logger = logging.getLogger(__name__)

# Axis permutation moving (a p q m n | a' p' q' m' n') to (a p m q n | a' p' m' q' n').
_KEEP_FIRST = (0, 1, 3, 2, 4, 5, 6, 8, 7, 9)


class ReducedState(BaseModel):
    """Alice + Bob-region-I state over the basis |a p m>, index a*4 + p*2 + m."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho: DensityMatrix
    provenance: Provenance
    ordering: Ordering = Ordering.PHYSICAL
    corrections: List[Correction] = Field(default_factory=list)

    @property
    def entries(self) -> np.ndarray:
        return self.rho.entries

    def element(self, ket: str, bra: str) -> float:
        """Matrix element <ket|rho|bra> addressed by bit strings such as '110'."""
        return float(self.entries[reduced_index(ket), reduced_index(bra)])


def reduce_rows(rows: np.ndarray, ordering: Ordering = Ordering.PHYSICAL) -> np.ndarray:
    """Reduced matrices of pure states given as amplitude rows (G, 32) -> (G, 8, 8)."""
    signed = rows * reorder_signs(ordering)
    blocks = signed.reshape((-1, 2, 2, 2, 2, 2)).transpose(0, 1, 2, 4, 3, 5).reshape(-1, REDUCED_DIM, 4)
    return np.einsum("gik,gjk->gij", blocks, blocks)


def reduce_components(components: List[Tuple[float, np.ndarray]], ordering: Ordering = Ordering.PHYSICAL) -> np.ndarray:
    """Reduced matrices of a convex mixture of pure components; trace is linear."""
    total = None
    for weight, rows in components:
        term = weight * reduce_rows(rows, ordering)
        total = term if total is None else total + term
    return total


def _partial_trace(rho32: np.ndarray, ordering: Ordering) -> np.ndarray:
    signs = reorder_signs(ordering)
    signed = rho32 * signs[:, None] * signs[None, :]
    tensor = signed.reshape((2,) * 10).transpose(_KEEP_FIRST).reshape(REDUCED_DIM, 4, REDUCED_DIM, 4)
    return np.einsum("ikjk->ij", tensor)


def trace_out_region_II(
    rho32: Union[DensityMatrix, np.ndarray],
    ordering: Ordering = Ordering.PHYSICAL,
) -> ReducedState:
    """Trace the region-II modes out of a 32-dim joint density matrix.

    Raises:
        InvalidStateError: If the input is not a valid 32-dim density matrix.
    """
    if isinstance(rho32, DensityMatrix):
        entries = rho32.entries
        if rho32.dim != JOINT_DIM:
            raise InvalidStateError(f"expected a 32-dim density matrix, got {rho32.dim}")
    else:
        entries = np.asarray(rho32, dtype=float)
        check_density(entries, dims=(JOINT_DIM,))
    reduced = _partial_trace(entries, ordering)
    return ReducedState(rho=DensityMatrix(entries=reduced), provenance=Provenance.ORACLE, ordering=ordering)


# Closed forms. Each builder returns {(ket, bra): value}; off-diagonals are
# listed once and mirrored. ``sigma`` is the sign of the entries that depend on
# the mode ordering (+1 physical, -1 product).

Entries = Dict[Tuple[str, str], float]


class _Trig:
    def __init__(self, params: StateParams, angle: float):
        g = params.gamma
        self.c, self.s = math.cos(g), math.sin(g)
        self.cos2g, self.sin2g = math.cos(2 * g), math.sin(2 * g)
        self.ca, self.sa = math.cos(angle), math.sin(angle)
        self.sin2a = math.sin(2 * angle)
        self.q_r, self.q_l = params.q_r, params.q_l

    def spread(self, q: float) -> float:
        """1/2 (1 - (1 - 2 q^2) cos 2g)."""
        return 0.5 * (1.0 - (1.0 - 2.0 * q * q) * self.cos2g)


def _phi_plus_entries(params: StateParams, sigma: float, printed: bool) -> Entries:
    t = _Trig(params, params.alpha)
    c, s, q_r, q_l = t.c, t.s, t.q_r, t.q_l
    return {
        ("000", "000"): t.ca**2 * c**4,
        ("000", "110"): q_r / 2 * t.sin2a * c**3,
        ("100", "100"): q_l**2 * t.sa**2 * c**2,
        ("110", "110"): t.spread(q_l if printed else q_r) * t.sa**2,
        ("001", "100"): -q_l / 2 * t.sin2a * c**2 * s,
        ("100", "111"): -q_r * q_l / 2 * t.sa**2 * t.sin2g,
        ("001", "001"): 0.25 * t.ca**2 * t.sin2g**2,
        ("010", "010"): 0.25 * t.ca**2 * t.sin2g**2,
        ("001", "111"): q_r / 2 * t.sin2a * c * s**2,
        ("111", "111"): q_r**2 * t.sa**2 * s**2,
        ("011", "110"): sigma * q_l / 2 * t.sin2a * s**3,
        ("011", "011"): t.ca**2 * s**4,
    }


def _phi_star_entries(params: StateParams, sigma: float, printed: bool) -> Entries:
    t = _Trig(params, params.alpha)
    c, s, q_r, q_l = t.c, t.s, t.q_r, t.q_l
    return {
        ("000", "000"): q_l**2 * t.ca**2 * c**2,
        ("010", "010"): t.spread(q_l if printed else q_r) * t.ca**2,
        ("010", "100"): q_r / 2 * c**3 * t.sin2a,
        ("100", "100"): c**4 * t.sa**2,
        ("000", "011"): -q_r * q_l / 2 * (t.sa**2 if printed else t.ca**2) * t.sin2g,
        ("000", "101"): -q_l / 2 * t.sin2a * c**2 * s,
        ("011", "011"): q_r**2 * t.ca**2 * s**2,
        ("011", "101"): q_r / 2 * t.sin2a * c * s**2,
        ("101", "101"): 0.25 * t.sa**2 * t.sin2g**2,
        ("110", "110"): 0.25 * t.sa**2 * t.sin2g**2,
        ("010", "111"): sigma * q_l / 2 * s**3 * t.sin2a,
        ("111", "111"): t.sa**2 * s**4,
    }


def _werner_entries(params: StateParams, sigma: float, printed: bool) -> Entries:
    f = params.fidelity
    t = _Trig(params, math.pi / 4)
    c, s, q_r, q_l = t.c, t.s, t.q_r, t.q_l
    tilt = 1.0 - 2.0 * q_r**2
    return {
        ("000", "110"): 0.5 * f * q_r * c**3,
        ("100", "100"): c**2 / 8 * (3 - 2 * q_r**2 + f * tilt + (1 - f) * t.cos2g),
        ("000", "000"): c**2 / 8 * (3 - 2 * q_r**2 - f * tilt + (1 + f) * t.cos2g),
        ("001", "100"): -f * q_l / 2 * c**2 * s,
        ("001", "111"): f * q_r / 2 * c * s**2,
        ("011", "110"): sigma * f * q_l / 2 * s**3,
        ("111", "111"): s**2 / 4 * ((1 + f) * q_r**2 + (1 - f) * s**2),
        ("011", "011"): s**2 / 4 * ((1 - f) * q_r**2 + (1 + f) * s**2),
        ("000", "011"): -(1 - f) * q_l * q_r / 8 * t.sin2g,
        ("100", "111"): -(1 + f) * q_l * q_r / 8 * t.sin2g,
        ("101", "101"): (1 - f) / 16 * t.sin2g**2,
        ("001", "001"): (1 + f) / 16 * t.sin2g**2,
        ("110", "110"): (2 * (1 + f) * (1 - tilt * t.cos2g) + (1 - f) * t.sin2g**2) / 16,
        ("010", "010"): (2 * (1 - f) * (1 - tilt * t.cos2g) + (1 + f) * t.sin2g**2) / 16,
    }


def _werner_like_entries(params: StateParams, sigma: float, printed: bool) -> Entries:
    f = params.fidelity
    t = _Trig(params, math.pi / 4)
    c, s, q_r, q_l = t.c, t.s, t.q_r, t.q_l
    tilt = 1.0 - 2.0 * q_r**2
    return {
        ("000", "110"): 0.5 * f * q_r * c**3,
        ("100", "100"): 0.5 * c**2 * (f * q_l**2 + (1 - f) * c**2),
        ("000", "000"): 0.5 * c**2 * ((1 - f) * q_l**2 + f * c**2),
        ("110", "110"): (1 + 3 * f - 4 * f * tilt * t.cos2g - (1 - f) * math.cos(4 * params.gamma)) / 16,
        ("001", "100"): -0.5 * f * q_l * c**2 * s,
        ("001", "111"): 0.5 * f * q_r * c * s**2,
        ("011", "110"): sigma * 0.5 * f * q_l * s**3,
        ("011", "011"): 0.5 * s**2 * ((1 - f) * q_r**2 + f * s**2),
        ("111", "111"): 0.5 * (f * q_r**2 * s**2 + (1 - f) * s**4),
        ("000", "011"): -0.25 * (1 - f) * q_r * q_l * t.sin2g,
        ("100", "111"): -0.25 * f * q_r * q_l * t.sin2g,
        ("101", "101"): (1 - f) / 8 * t.sin2g**2,
        ("001", "001"): f / 8 * t.sin2g**2,
        ("010", "010"): (2 * (1 - f) * (1 - tilt * t.cos2g) + f * t.sin2g**2) / 8,
    }


_CLOSED_FORMS: Dict[Family, Callable[[StateParams, float, bool], Entries]] = {
    Family.PHI_PLUS: _phi_plus_entries,
    Family.PHI_STAR: _phi_star_entries,
    Family.WERNER: _werner_entries,
    Family.WERNER_LIKE: _werner_like_entries,
}

CORRECTIONS: Dict[Family, List[Correction]] = {
    Family.PHI_PLUS: [
        Correction(
            entry="|110><110|",
            printed="1/2 (1 - (1 - 2 q_L^2) cos 2g) sin^2 a",
            corrected="1/2 (1 - (1 - 2 q_R^2) cos 2g) sin^2 a",
        ),
    ],
    Family.PHI_STAR: [
        Correction(
            entry="|010><010|",
            printed="1/2 (1 - (1 - 2 q_L^2) cos 2g) cos^2 a",
            corrected="1/2 (1 - (1 - 2 q_R^2) cos 2g) cos^2 a",
        ),
        Correction(
            entry="|000><011|",
            printed="-(q_R q_L / 2) sin^2 a sin 2g",
            corrected="-(q_R q_L / 2) cos^2 a sin 2g",
        ),
    ],
    Family.WERNER: [],
    Family.WERNER_LIKE: [],
}


def closed_form_reduced(
    kind: Union[Family, str],
    params: StateParams,
    ordering: Ordering = Ordering.PHYSICAL,
    printed: bool = False,
) -> ReducedState:
    """Reduced state from the closed-form expressions.

    With ``printed=True`` the published expressions are reproduced verbatim
    (physical ordering only); such matrices need not be valid states, so only
    symmetry is guaranteed and provenance is ``printed``.

    Raises:
        ValueError: For phi_minus (no closed form), missing gamma or the
            family's sweep parameter, or printed matrices in product ordering.
    """
    family = kind if isinstance(kind, Family) else Family.parse(kind)
    if family not in _CLOSED_FORMS:
        raise ValueError(f"no closed form for {family.value}")
    if params.gamma is None:
        raise ValueError("closed forms need gamma")
    params.require(family)
    if printed and ordering != Ordering.PHYSICAL:
        raise ValueError("printed matrices exist in physical ordering only")

    sigma = 1.0 if ordering == Ordering.PHYSICAL else -1.0
    matrix = np.zeros((REDUCED_DIM, REDUCED_DIM))
    for (ket, bra), value in _CLOSED_FORMS[family](params, sigma, printed).items():
        i, j = reduced_index(ket), reduced_index(bra)
        matrix[i, j] = value
        matrix[j, i] = value
    matrix.flags.writeable = False

    if printed:
        return ReducedState(rho=DensityMatrix.model_construct(entries=matrix), provenance=Provenance.PRINTED)
    return ReducedState(
        rho=DensityMatrix(entries=matrix),
        provenance=Provenance.CLOSED_FORM,
        ordering=ordering,
        corrections=list(CORRECTIONS[family]),
    )


def compare_reduced(a: ReducedState, b: ReducedState) -> float:
    """Largest absolute entrywise difference between two reduced states."""
    if a.entries.shape != b.entries.shape:
        raise ValueError(f"cannot compare shapes {a.entries.shape} and {b.entries.shape}")
    gap = float(np.max(np.abs(a.entries - b.entries)))
    logger.debug("compare %s vs %s: max gap %.3e", a.provenance.value, b.provenance.value, gap)
    return gap
