"""Occupation-number basis, index arithmetic and the state containers.

Joint labels are |a p q m n> read most-significant-bit first: Alice's inertial
qubit ``a``, then Bob's four Rindler modes in physical ordering
(region-I particle ``p``, region-II antiparticle ``q``, region-I antiparticle
``m``, region-II particle ``n``). Mode-only labels drop ``a``.
"""

from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, field_validator

from ..schema import Ordering


NORM_TOL = 1e-12
OUTER_NORM_TOL = 1e-9
SYMMETRY_TOL = 1e-14
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

MODE_DIM = 16
JOINT_DIM = 32
REDUCED_DIM = 8


class InvalidStateError(ValueError):
    """Raised when a vector or matrix violates the state invariants."""


class BasisLabel(BaseModel):
    """Occupation bits of one basis ket; ``a`` is None for mode-only labels."""

    model_config = ConfigDict(frozen=True)

    p: int
    q: int
    m: int
    n: int
    a: int | None = None

    @field_validator("a", "p", "q", "m", "n")
    @classmethod
    def _is_bit(cls, v: int | None) -> int | None:
        if v is not None and v not in (0, 1):
            raise ValueError(f"occupation must be 0 or 1, got {v}")
        return v

    def __str__(self) -> str:
        bits = f"{self.p}{self.q}{self.m}{self.n}"
        return f"|{bits}>" if self.a is None else f"|{self.a},{bits}>"


def index_of(label: BasisLabel) -> int:
    """Linear index a*16 + p*8 + q*4 + m*2 + n (a omitted for mode labels)."""
    mode = label.p * 8 + label.q * 4 + label.m * 2 + label.n
    return mode if label.a is None else label.a * 16 + mode


def label_of(index: int, joint: bool = True) -> BasisLabel:
    """Inverse of index_of over 0..31 (joint) or 0..15 (mode-only)."""
    size = JOINT_DIM if joint else MODE_DIM
    if not 0 <= index < size:
        raise IndexError(f"basis index {index} outside 0..{size - 1}")
    bits = [(index >> shift) & 1 for shift in (3, 2, 1, 0)]
    a = (index >> 4) & 1 if joint else None
    return BasisLabel(a=a, p=bits[0], q=bits[1], m=bits[2], n=bits[3])


def reduced_label(index: int) -> str:
    """Ket string |apm> for an index of the reduced 8-dim basis."""
    return "|" + format(index, "03b") + ">"


def reduced_index(bits: str) -> int:
    """Index a*4 + p*2 + m of a reduced ket given as '110' or '|110>'."""
    return int(bits.strip("|>"), 2)


def reorder_signs(ordering: Ordering = Ordering.PHYSICAL) -> np.ndarray:
    """Diagonal of the sign operator taking |a p q m n> to |a p m>|q n>.

    Moving the region-II antiparticle ``q`` past the region-I antiparticle
    ``m`` anticommutes once when both are occupied.
    """
    signs = np.ones(JOINT_DIM)
    if ordering == Ordering.PHYSICAL:
        for index in range(JOINT_DIM):
            if (index >> 2) & 1 and (index >> 1) & 1:
                signs[index] = -1.0
    return signs


def _frozen(values: ArrayLike) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.flags.writeable = False
    return array


def check_density(entries: np.ndarray, dims: Sequence[int] = (REDUCED_DIM, JOINT_DIM)) -> None:
    """Raise InvalidStateError unless ``entries`` is a valid density matrix."""
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] not in dims:
        raise InvalidStateError(f"density matrix shape {entries.shape} not in {tuple(dims)}")
    if not np.all(np.isfinite(entries)):
        raise InvalidStateError("density matrix has non-finite entries")
    asymmetry = np.max(np.abs(entries - entries.T))
    if asymmetry > SYMMETRY_TOL:
        raise InvalidStateError(f"density matrix is not symmetric (max gap {asymmetry:.3e})")
    trace = np.trace(entries)
    if abs(trace - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"density matrix trace {trace!r} differs from 1")
    lowest = np.linalg.eigvalsh(entries)[0]
    if lowest < -PSD_TOL:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lowest:.3e}")


class PureState(BaseModel):
    """Unit-norm real amplitude vector over the 16-dim mode or 32-dim joint basis."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _check_amplitudes(cls, v: ArrayLike) -> np.ndarray:
        array = _frozen(v)
        if array.ndim != 1 or array.shape[0] not in (MODE_DIM, JOINT_DIM):
            raise InvalidStateError(f"amplitude vector of shape {array.shape} is not 16 or 32 long")
        norm = np.linalg.norm(array)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state norm {norm!r} differs from 1")
        return array

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def amplitude(self, label: BasisLabel) -> float:
        return float(self.amplitudes[index_of(label)])

    def support(self) -> List[BasisLabel]:
        """Labels carrying a nonzero amplitude."""
        joint = self.dim == JOINT_DIM
        return [label_of(int(i), joint) for i in np.flatnonzero(self.amplitudes)]


class DensityMatrix(BaseModel):
    """Real symmetric, unit-trace, PSD matrix of dimension 8 or 32."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _check_entries(cls, v: ArrayLike) -> np.ndarray:
        array = _frozen(v)
        check_density(array)
        return array

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


def outer(psi: Union[PureState, ArrayLike]) -> DensityMatrix:
    """Return |psi><psi|.

    Raw vectors are accepted but must be normalized to within 1e-9; the
    residual norm error is divided out.
    """
    if isinstance(psi, PureState):
        vector = psi.amplitudes
    else:
        vector = np.asarray(psi, dtype=float)
        norm = np.linalg.norm(vector)
        if abs(norm - 1.0) > OUTER_NORM_TOL:
            raise InvalidStateError(f"cannot form projector of vector with norm {norm!r}")
        vector = vector / norm
    return DensityMatrix(entries=np.outer(vector, vector))


def mix(terms: Iterable[Tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex combination sum_k w_k rho_k."""
    terms = list(terms)
    if not terms:
        raise InvalidStateError("mixture needs at least one term")
    dims = {rho.dim for _, rho in terms}
    if len(dims) != 1:
        raise InvalidStateError(f"mixture terms have different dimensions {sorted(dims)}")
    weights = [float(w) for w, _ in terms]
    if any(w < 0.0 for w in weights):
        raise InvalidStateError("mixture weights must be non-negative")
    if abs(sum(weights) - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"mixture weights sum to {sum(weights)!r}, not 1")
    total = np.zeros_like(terms[0][1].entries)
    for weight, rho in zip(weights, (rho for _, rho in terms)):
        total = total + weight * rho.entries
    return DensityMatrix(entries=total)
