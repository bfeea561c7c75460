"""Negativity-vs-acceleration sweeps and their analysis.

Curves are evaluated through the oracle path (lifted states -> partial trace
-> negativity) with every gamma of the grid handled in one vectorized batch.
Extrema found on the grid are refined by golden-section search on the true
negativity, never on interpolated samples.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..schema import (
    EPS_AMP,
    QUARTER_PI,
    AmplificationReport,
    Curve,
    Family,
    Ordering,
    ParameterRangeError,
    StateParams,
    ThresholdResult,
    VariationPoint,
)
from .entanglement import negativity_batch
from .families import get_family
from .reduction import reduce_components


logger = logging.getLogger(__name__)

DEFAULT_GRID_N = 2001
DEFAULT_REFINE_TOL = 1e-8
DEFAULT_TOL_ALPHA = 1e-4
DEFAULT_SCAN_POINTS = 64
SCAN_ALPHA_MIN = 0.01

# Forward differences at or below this are treated as flat.
FLAT_TOL = 1e-13

INV_PHI = (math.sqrt(5) - 1) / 2


def evaluate(
    family: Union[Family, str],
    params: StateParams,
    gammas: Sequence[float],
    ordering: Ordering = Ordering.PHYSICAL,
) -> np.ndarray:
    """Oracle negativity at each gamma in ``gammas``."""
    components = get_family(family).components(params, gammas)
    return negativity_batch(reduce_components(components, ordering))


def negativity_curve(
    family: Union[Family, str],
    params: StateParams,
    grid_n: int = DEFAULT_GRID_N,
    ordering: Ordering = Ordering.PHYSICAL,
) -> Curve:
    """Sample N(gamma) on a uniform grid of ``grid_n`` points over [0, pi/4]."""
    if grid_n < 3:
        raise ValueError(f"grid_n must be at least 3, got {grid_n}")
    state_family = get_family(family)
    params.require(state_family.name)
    params = params.model_copy(update={"gamma": None})
    grid = np.linspace(0.0, QUARTER_PI, grid_n)
    values = evaluate(state_family.name, params, grid, ordering)
    logger.debug("curve %s %s: %d points, N(0)=%.6f N(pi/4)=%.6f",
                 state_family.name.value, params.model_dump(exclude_none=True), grid_n, values[0], values[-1])
    return Curve(
        family=state_family.name,
        params=params,
        ordering=ordering,
        grid=grid.tolist(),
        values=values.tolist(),
    )


def golden_section(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    tol: float,
    maximize: bool = False,
) -> Tuple[float, float]:
    """Locate the extremum of a unimodal f on [lower, upper].

    The bracket is shrunk by 1/phi per step until it is at most ``tol``
    wide. Returns the better interior point of the final bracket and f
    there, so callers never evaluate f again.
    """
    sign = -1.0 if maximize else 1.0
    lo, hi = min(lower, upper), max(lower, upper)
    if hi - lo <= tol:
        x = 0.5 * (lo + hi)
        return x, f(x)

    steps = math.ceil(math.log(tol / (hi - lo)) / math.log(INV_PHI))
    left, right = hi - INV_PHI * (hi - lo), lo + INV_PHI * (hi - lo)
    f_left, f_right = f(left), f(right)

    for _ in range(steps):
        if sign * f_left < sign * f_right:
            hi, right, f_right = right, left, f_left
            left = hi - INV_PHI * (hi - lo)
            f_left = f(left)
        else:
            lo, left, f_left = left, right, f_right
            right = lo + INV_PHI * (hi - lo)
            f_right = f(right)

    if sign * f_left < sign * f_right:
        return left, f_left
    return right, f_right


def _refine(curve: Curve, kind: str, lower: float, upper: float, tol: float) -> Optional[VariationPoint]:
    def negativity_at(gamma: float) -> float:
        return float(evaluate(curve.family, curve.params, [gamma], curve.ordering)[0])

    gamma_star, value = golden_section(negativity_at, lower, upper, tol, maximize=kind == "local_max")
    if not 0.0 < gamma_star < QUARTER_PI:
        logger.debug("dropping %s at boundary gamma=%.3e", kind, gamma_star)
        return None
    logger.debug("%s refined to gamma=%.10f, N=%.10f", kind, gamma_star, value)
    return VariationPoint(gamma_star=gamma_star, kind=kind, value=value)


def variation_points(curve: Curve, refine_tol: float = DEFAULT_REFINE_TOL) -> List[VariationPoint]:
    """Interior extrema of a curve, refined to a bracket of width <= refine_tol.

    A variation point is reported wherever the forward differences of the
    samples change sign; a flat run between opposite slopes counts once.
    """
    if refine_tol <= 0:
        raise ValueError("refine_tol must be positive")
    grid = curve.grid
    diffs = np.diff(np.asarray(curve.values))
    slopes = np.where(np.abs(diffs) <= FLAT_TOL, 0.0, np.sign(diffs))

    points: List[VariationPoint] = []
    last_slope, last_k = 0.0, 0
    for k, slope in enumerate(slopes):
        if slope == 0.0:
            continue
        if last_slope != 0.0 and slope != last_slope:
            kind = "local_min" if last_slope < 0 else "local_max"
            point = _refine(curve, kind, grid[last_k], grid[k + 1], refine_tol)
            if point is not None:
                points.append(point)
        last_slope, last_k = slope, k
    return sorted(points, key=lambda p: p.gamma_star)


def amplification_report(
    curve: Curve,
    points: Optional[List[VariationPoint]] = None,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> AmplificationReport:
    """Does negativity recover above an interior minimum by gamma = pi/4?"""
    if points is None:
        points = variation_points(curve, refine_tol)
    minima = [p for p in points if p.kind == "local_min"]
    if not minima:
        return AmplificationReport(amplified=False, variation_count=len(points))
    deepest = min(minima, key=lambda p: p.value)
    gain = curve.values[-1] - deepest.value
    amplified = gain > EPS_AMP
    return AmplificationReport(
        amplified=amplified,
        min_point=deepest,
        gain=gain if amplified else None,
        variation_count=len(points),
    )


def amplification_threshold(
    q_r: float,
    tol_alpha: float = DEFAULT_TOL_ALPHA,
    family: Union[Family, str] = Family.PHI_PLUS,
    grid_n: int = DEFAULT_GRID_N,
    scan_points: int = DEFAULT_SCAN_POINTS,
    ordering: Ordering = Ordering.PHYSICAL,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> ThresholdResult:
    """Smallest alpha above which the curve shows amplification.

    The predicate is first scanned on ``scan_points`` alphas in [0.01, pi/4];
    it must switch from False to True at most once, otherwise the first
    True -> False bracket is reported instead of a threshold.

    With the default grid, Phi+ at q_R = 1/sqrt(2) gives alpha* ~ 0.5621 and
    q_R = 0.609 is amplified on every scanned alpha.
    """
    if tol_alpha <= 0:
        raise ValueError("tol_alpha must be positive")
    state_family = get_family(family)
    if state_family.name.is_mixed:
        raise ValueError("threshold search runs over alpha, which mixed families lack")
    StateParams(q_r=q_r)

    def amplified(alpha: float) -> bool:
        params = StateParams(q_r=q_r, alpha=alpha)
        curve = negativity_curve(state_family.name, params, grid_n, ordering)
        return amplification_report(curve, refine_tol=refine_tol).amplified

    alphas = np.linspace(SCAN_ALPHA_MIN, QUARTER_PI, scan_points)
    flags = [amplified(float(alpha)) for alpha in alphas]
    logger.debug("threshold scan q_R=%.6f: %d/%d amplified", q_r, sum(flags), len(flags))
    result = ThresholdResult(q_r=q_r, family=state_family.name, tol=tol_alpha)

    for i in range(len(flags) - 1):
        if flags[i] and not flags[i + 1]:
            bracket = (float(alphas[i]), float(alphas[i + 1]))
            logger.warning("amplification predicate not monotone in alpha on %s", bracket)
            return result.model_copy(update={"non_monotone_bracket": bracket})
    if not any(flags):
        return result
    if all(flags):
        return result.model_copy(update={"amplified_everywhere": True})

    first = flags.index(True)
    lower, upper = float(alphas[first - 1]), float(alphas[first])
    while upper - lower > tol_alpha:
        middle = 0.5 * (lower + upper)
        if amplified(middle):
            upper = middle
        else:
            lower = middle
    alpha_star = 0.5 * (lower + upper)
    logger.debug("threshold q_R=%.6f: alpha*=%.6f", q_r, alpha_star)
    return result.model_copy(update={"alpha_star": alpha_star})


def gamma_of_acceleration(a: float, omega: float, c: float = 1.0) -> float:
    """gamma = arccos((exp(-2 pi Omega c / a) + 1)^(-1/2)); 0 inertial, pi/4 infinite."""
    for name, value in (("a", a), ("Omega", omega), ("c", c)):
        if not value > 0 or math.isinf(value):
            raise ParameterRangeError(f"{name} must be positive and finite, got {value!r}")
    cos_gamma = (math.exp(-2 * math.pi * omega * c / a) + 1.0) ** -0.5
    return math.acos(min(1.0, cos_gamma))


def acceleration_of_gamma(gamma: float, omega: float, c: float = 1.0) -> float:
    """Inverse of gamma_of_acceleration: a = -pi Omega c / ln tan gamma."""
    if not 0.0 <= gamma <= QUARTER_PI:
        raise ParameterRangeError(f"gamma={gamma!r} outside [0, pi/4]")
    if not omega > 0 or not c > 0:
        raise ParameterRangeError("Omega and c must be positive")
    if gamma == 0.0:
        return 0.0
    # tan(pi/4) rounds to 1 - 2^-53, so the endpoint is matched before the log.
    if gamma >= QUARTER_PI:
        return math.inf
    log_tan = math.log(math.tan(gamma))
    if log_tan >= 0.0:
        return math.inf
    return -math.pi * omega * c / log_tan
