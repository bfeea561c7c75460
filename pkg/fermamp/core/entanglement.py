"""Negativity of the Alice | Bob-region-I bipartition."""

import logging
import math
from typing import List, Union

import numpy as np
from pydantic import BaseModel

from ..schema import Family, StateParams
from .fock_basis import REDUCED_DIM, DensityMatrix
from .reduction import ReducedState


logger = logging.getLogger(__name__)

TOL_ZERO = 1e-10
RESIDUAL_TOL = 1e-10
INPUT_SYMMETRY_TOL = 1e-12
TRACE_NORM_TOL = 1e-9


class SpectrumError(ArithmeticError):
    """Raised when the eigensolver misses its accuracy contract."""


class Spectrum(BaseModel):
    """Ascending eigenvalues with the worst eigen-equation residual."""

    eigenvalues: List[float]
    residual: float


def _entries(rho: Union[ReducedState, DensityMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(rho, (ReducedState, DensityMatrix)):
        return rho.entries
    return np.asarray(rho, dtype=float)


def partial_transpose_alice(rho: Union[ReducedState, DensityMatrix, np.ndarray]) -> np.ndarray:
    """Transpose Alice's qubit: out[(a,b),(a',b')] = in[(a',b),(a,b')].

    Accepts a single 8x8 matrix or a stack (..., 8, 8). The result is symmetric
    with the same trace but is generally not positive semidefinite.
    """
    entries = _entries(rho)
    if entries.shape[-2:] != (REDUCED_DIM, REDUCED_DIM):
        raise ValueError(f"expected 8x8 matrices, got shape {entries.shape}")
    lead = entries.shape[:-2]
    blocks = entries.reshape(lead + (2, 4, 2, 4))
    n = len(lead)
    axes = tuple(range(n)) + (n + 2, n + 1, n, n + 3)
    return blocks.transpose(axes).reshape(entries.shape)


def eigenvalues_symmetric(matrix: np.ndarray) -> Spectrum:
    """All eigenvalues of a real symmetric matrix, with residual check.

    Raises:
        ValueError: If the input is not square or not symmetric within 1e-12.
        SpectrumError: If some eigenpair has residual above 1e-10.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if np.max(np.abs(matrix - matrix.T)) > INPUT_SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric")
    values, vectors = np.linalg.eigh(matrix)
    residual = float(np.max(np.linalg.norm(matrix @ vectors - vectors * values, axis=0)))
    if residual > RESIDUAL_TOL:
        raise SpectrumError(f"eigen residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}")
    return Spectrum(eigenvalues=values.tolist(), residual=residual)


def _negativity_from_spectra(values: np.ndarray, traces: np.ndarray) -> np.ndarray:
    """Sum of |lambda| over lambda < -TOL_ZERO, cross-checked by the trace norm."""
    negative = np.where(values < -TOL_ZERO, -values, 0.0).sum(axis=-1)
    trace_norm = (np.abs(values).sum(axis=-1) - traces) / 2
    gap = np.max(np.abs(negative - trace_norm))
    if gap > TRACE_NORM_TOL:
        raise SpectrumError(f"negativity and trace-norm estimate disagree by {gap:.3e}")
    return negative


def negativity(rho: Union[ReducedState, DensityMatrix]) -> float:
    """Negativity sum_{lambda<0} |lambda| of the partial transpose on Alice."""
    transposed = partial_transpose_alice(rho)
    spectrum = eigenvalues_symmetric(transposed)
    values = np.array(spectrum.eigenvalues)
    return float(_negativity_from_spectra(values, np.array(np.trace(transposed)))) + 0.0


def negativity_batch(reduced: np.ndarray) -> np.ndarray:
    """Negativity of a stack of reduced matrices (G, 8, 8) -> (G,)."""
    transposed = partial_transpose_alice(reduced)
    values = np.linalg.eigvalsh(transposed)
    traces = np.trace(transposed, axis1=-2, axis2=-1)
    return _negativity_from_spectra(values, traces) + 0.0


def inertial_negativity(family: Family, params: StateParams) -> float:
    """Negativity at gamma = 0 for the pure families.

    At zero acceleration the one-particle Unruh state still leaves weight q_L
    in region II, so only at q_R = 1 does this reduce to 1/2 sin 2a.
    """
    if family.is_mixed:
        raise ValueError("closed-form inertial negativity is only derived for pure families")
    alpha = params.require(family)
    q_r, q_l = params.q_r, params.q_l
    # Phi* swaps which branch of Alice carries the excitation.
    weight = math.sin(alpha) ** 2 if family != Family.PHI_STAR else math.cos(alpha) ** 2
    lost = q_l**2 * weight
    return 0.5 * (math.sqrt(lost**2 + q_r**2 * math.sin(2 * alpha) ** 2) - lost)
