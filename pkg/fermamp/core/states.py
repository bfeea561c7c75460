"""Unruh vacuum, Unruh one-particle states and the joint Alice-Bob states.

Every builder has a batched ``*_rows`` form taking an array of gammas and
returning one amplitude row per gamma; the scalar builders wrap row 0 in a
validated PureState / DensityMatrix.
"""

import math
from typing import List, Literal, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..schema import HALF_PI, QUARTER_PI, check_range
from .fock_basis import MODE_DIM, DensityMatrix, PureState, mix, outer


Sign = Literal["plus", "minus"]

# Mode indices p*8 + q*4 + m*2 + n of the kets that appear in the Unruh states.
_0000, _0001, _0010, _0011 = 0b0000, 0b0001, 0b0010, 0b0011
_0100, _0111, _1000, _1011 = 0b0100, 0b0111, 0b1000, 0b1011
_1100, _1101, _1110, _1111 = 0b1100, 0b1101, 0b1110, 0b1111


def _gammas(gamma: ArrayLike) -> np.ndarray:
    gammas = np.atleast_1d(np.asarray(gamma, dtype=float))
    if gammas.ndim != 1 or gammas.size == 0:
        raise ValueError("gamma must be a scalar or a non-empty 1-d array")
    for value in (gammas.min(), gammas.max()):
        check_range("gamma", value, 0.0, QUARTER_PI)
    return np.clip(gammas, 0.0, QUARTER_PI)


def _q_weights(q_r: float) -> Tuple[float, float]:
    q_r = check_range("q_R", q_r, 0.0, 1.0)
    return q_r, math.sqrt(max(0.0, 1.0 - q_r * q_r))


def vacuum_rows(gamma: ArrayLike) -> np.ndarray:
    """Unruh vacuum amplitudes, shape (len(gamma), 16)."""
    g = _gammas(gamma)
    c, s = np.cos(g), np.sin(g)
    rows = np.zeros((g.size, MODE_DIM))
    rows[:, _0000] = c * c
    rows[:, _0011] = -s * c
    rows[:, _1100] = s * c
    rows[:, _1111] = -s * s
    return rows


def one_particle_rows(sign: Sign, gamma: ArrayLike, q_r: float) -> np.ndarray:
    """Unruh one-particle amplitudes |1^+> or |1^->, shape (len(gamma), 16)."""
    g = _gammas(gamma)
    q_r, q_l = _q_weights(q_r)
    c, s = np.cos(g), np.sin(g)
    rows = np.zeros((g.size, MODE_DIM))
    if sign == "plus":
        rows[:, _1000] = q_r * c
        rows[:, _1011] = -q_r * s
        rows[:, _1101] = q_l * s
        rows[:, _0001] = q_l * c
    elif sign == "minus":
        rows[:, _0100] = q_l * c
        rows[:, _0111] = -q_l * s
        rows[:, _1110] = q_r * s
        rows[:, _0010] = q_r * c
    else:
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    return rows


def lift(weight_0: float, bob_0: np.ndarray, weight_1: float, bob_1: np.ndarray) -> np.ndarray:
    """Rows of w0 |0>_A (x) bob_0 + w1 |1>_A (x) bob_1 in the 32-dim joint basis."""
    return np.concatenate([weight_0 * bob_0, weight_1 * bob_1], axis=-1)


def _alpha(alpha: float) -> float:
    return check_range("alpha", alpha, 0.0, HALF_PI)


def phi_plus_rows(alpha: float, gamma: ArrayLike, q_r: float) -> np.ndarray:
    alpha = _alpha(alpha)
    return lift(math.cos(alpha), vacuum_rows(gamma), math.sin(alpha), one_particle_rows("plus", gamma, q_r))


def phi_minus_rows(alpha: float, gamma: ArrayLike, q_r: float) -> np.ndarray:
    alpha = _alpha(alpha)
    return lift(math.cos(alpha), vacuum_rows(gamma), math.sin(alpha), one_particle_rows("minus", gamma, q_r))


def phi_star_rows(alpha: float, gamma: ArrayLike, q_r: float) -> np.ndarray:
    # Alice's |0> pairs with the one-particle state here.
    alpha = _alpha(alpha)
    return lift(math.cos(alpha), one_particle_rows("plus", gamma, q_r), math.sin(alpha), vacuum_rows(gamma))


def lifted_products(gamma: ArrayLike, q_r: float) -> List[np.ndarray]:
    """Rows of |a>|b>_U for a in {0,1}, b in {0_U, 1^+_U}: |00>, |01>, |10>, |11>."""
    vacuum = vacuum_rows(gamma)
    particle = one_particle_rows("plus", gamma, q_r)
    zero = np.zeros_like(vacuum)
    return [
        lift(1.0, vacuum, 0.0, zero),
        lift(1.0, particle, 0.0, zero),
        lift(0.0, zero, 1.0, vacuum),
        lift(0.0, zero, 1.0, particle),
    ]


def werner_components(fidelity: float, gamma: ArrayLike, q_r: float) -> List[Tuple[float, np.ndarray]]:
    """Convex decomposition F |Phi+(pi/4)><.| + (1-F)/4 sum of the lifted products."""
    fidelity = check_range("F", fidelity, 0.0, 1.0)
    noise = (1.0 - fidelity) / 4
    components = [(fidelity, phi_plus_rows(QUARTER_PI, gamma, q_r))]
    components.extend((noise, rows) for rows in lifted_products(gamma, q_r))
    return components


def werner_like_components(fidelity: float, gamma: ArrayLike, q_r: float) -> List[Tuple[float, np.ndarray]]:
    """Convex decomposition F |Phi+(pi/4)><.| + (1-F)/2 (|0,1^+><.| + |1,0_U><.|)."""
    fidelity = check_range("F", fidelity, 0.0, 1.0)
    _, zero_one, one_zero, _ = lifted_products(gamma, q_r)
    noise = (1.0 - fidelity) / 2
    return [
        (fidelity, phi_plus_rows(QUARTER_PI, gamma, q_r)),
        (noise, zero_one),
        (noise, one_zero),
    ]


def unruh_vacuum(gamma: float) -> PureState:
    """cos^2 g |0000> - sin g cos g |0011> + sin g cos g |1100> - sin^2 g |1111>."""
    return PureState(amplitudes=vacuum_rows(gamma)[0])


def unruh_one_particle(sign: Sign, gamma: float, q_r: float) -> PureState:
    return PureState(amplitudes=one_particle_rows(sign, gamma, q_r)[0])


def phi_plus(alpha: float, gamma: float, q_r: float) -> PureState:
    """cos a |0>|0_U> + sin a |1>|1^+_U>."""
    return PureState(amplitudes=phi_plus_rows(alpha, gamma, q_r)[0])


def phi_minus(alpha: float, gamma: float, q_r: float) -> PureState:
    """cos a |0>|0_U> + sin a |1>|1^-_U>."""
    return PureState(amplitudes=phi_minus_rows(alpha, gamma, q_r)[0])


def phi_star(alpha: float, gamma: float, q_r: float) -> PureState:
    """cos a |0>|1^+_U> + sin a |1>|0_U>."""
    return PureState(amplitudes=phi_star_rows(alpha, gamma, q_r)[0])


def mixture_of(components: List[Tuple[float, np.ndarray]]) -> DensityMatrix:
    """Validated 32-dim mixture built from the first row of each component."""
    return mix((weight, outer(rows[0])) for weight, rows in components)


def werner(fidelity: float, gamma: float, q_r: float) -> DensityMatrix:
    """Werner state prepared inertially, with each branch lifted to Unruh modes."""
    return mixture_of(werner_components(fidelity, gamma, q_r))


def werner_like(fidelity: float, gamma: float, q_r: float) -> DensityMatrix:
    return mixture_of(werner_like_components(fidelity, gamma, q_r))

