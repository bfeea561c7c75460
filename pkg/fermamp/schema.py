"""Pydantic models shared by the library and the CLI."""

import math
from enum import Enum
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator


QUARTER_PI = math.pi / 4
HALF_PI = math.pi / 2
INV_SQRT2 = 1 / math.sqrt(2)

# Slack for range checks on ten-digit decimals such as 0.7853981634.
RANGE_SLACK = 1e-10

# Largest negativity any state of this package can carry (Alice is a qubit).
NEGATIVITY_CEILING = 0.5 + 1e-10

# Minimal gain for a dip followed by recovery to count as amplification.
EPS_AMP = 1e-9


class ParameterRangeError(ValueError):
    """Raised when a physical parameter lies outside its admissible range."""


def check_range(name: str, value: float, low: float, high: float) -> float:
    """Return ``value`` as float, raising ParameterRangeError outside [low, high]."""
    value = float(value)
    if math.isnan(value) or value < low - RANGE_SLACK or value > high + RANGE_SLACK:
        raise ParameterRangeError(f"{name}={value!r} outside [{low:.10g}, {high:.10g}]")
    return min(max(value, low), high)


class Family(str, Enum):
    """The five joint Alice-Bob state families."""

    PHI_PLUS = "phi_plus"
    PHI_MINUS = "phi_minus"
    PHI_STAR = "phi_star"
    WERNER = "werner"
    WERNER_LIKE = "werner_like"

    @classmethod
    def parse(cls, name: str) -> "Family":
        """Accept CLI spellings such as ``phi-plus``."""
        try:
            return cls(name.strip().lower().replace("-", "_"))
        except ValueError:
            raise ValueError(f"Unknown state family: {name}") from None

    @property
    def is_mixed(self) -> bool:
        return self in (Family.WERNER, Family.WERNER_LIKE)

    @property
    def parameter(self) -> str:
        """Name of the StateParams field this family is swept over."""
        return "fidelity" if self.is_mixed else "alpha"


class Ordering(str, Enum):
    """Mode ordering used when tracing out region II.

    ``physical`` reorders |p q m n> into |p m>|q n> with the fermionic sign
    (-1)^(q*m); ``product`` treats the kets as a plain tensor-product basis.
    """

    PHYSICAL = "physical"
    PRODUCT = "product"


class Provenance(str, Enum):
    ORACLE = "oracle"
    CLOSED_FORM = "closed_form"
    PRINTED = "printed"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class Command(str, Enum):
    CURVE = "curve"
    MATRIX = "matrix"
    VARIATION = "variation"
    THRESHOLD = "threshold"
    VERIFY = "verify"
    SWEEP = "sweep"


class StateParams(BaseModel):
    """Physical parameters of a joint state.

    ``gamma`` is optional because curves sweep it; ``alpha`` is needed by the
    pure families and ``fidelity`` by the mixed ones.
    """

    model_config = ConfigDict(frozen=True)

    q_r: float = Field(description="Unruh right-mode weight in [0, 1]; 1 is the single-mode case")
    alpha: Optional[float] = Field(default=None, description="Entanglement angle in [0, pi/2]")
    gamma: Optional[float] = Field(default=None, description="Acceleration parameter in [0, pi/4]")
    fidelity: Optional[float] = Field(default=None, description="Mixing fidelity F in [0, 1]")

    @field_validator("q_r")
    @classmethod
    def _check_q_r(cls, v: float) -> float:
        return check_range("q_R", v, 0.0, 1.0)

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, v: Optional[float]) -> Optional[float]:
        return None if v is None else check_range("alpha", v, 0.0, HALF_PI)

    @field_validator("gamma")
    @classmethod
    def _check_gamma(cls, v: Optional[float]) -> Optional[float]:
        return None if v is None else check_range("gamma", v, 0.0, QUARTER_PI)

    @field_validator("fidelity")
    @classmethod
    def _check_fidelity(cls, v: Optional[float]) -> Optional[float]:
        return None if v is None else check_range("F", v, 0.0, 1.0)

    @property
    def q_l(self) -> float:
        """Non-negative left-mode weight, sqrt(1 - q_R^2)."""
        return math.sqrt(max(0.0, 1.0 - self.q_r * self.q_r))

    def require(self, family: Family) -> float:
        """Return the family's sweep parameter, failing if it is unset."""
        value = getattr(self, family.parameter)
        if value is None:
            raise ParameterRangeError(f"{family.value} requires {family.parameter}")
        return value


class Correction(BaseModel):
    """One entry of a printed closed form that was replaced by its derived value."""

    entry: str = Field(description="Matrix element, e.g. |110><110|")
    printed: str
    corrected: str


class Curve(BaseModel):
    """Negativity sampled on a uniform gamma grid covering [0, pi/4]."""

    family: Family
    params: StateParams
    ordering: Ordering = Ordering.PHYSICAL
    grid: List[float]
    values: List[float]

    @model_validator(mode="after")
    def _check_curve(self) -> "Curve":
        if len(self.grid) != len(self.values) or len(self.grid) < 3:
            raise ValueError("grid and values must have equal length >= 3")
        if self.grid[0] != 0.0 or self.grid[-1] != QUARTER_PI:
            raise ValueError("grid must start at 0 and end at pi/4")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if any(v < 0.0 or v > NEGATIVITY_CEILING for v in self.values):
            raise ValueError("negativity values must lie in [0, 0.5]")
        return self


class VariationPoint(BaseModel):
    """An interior extremum of a negativity curve."""

    gamma_star: float
    kind: Literal["local_min", "local_max"]
    value: float

    @field_validator("gamma_star")
    @classmethod
    def _interior(cls, v: float) -> float:
        if not 0.0 < v < QUARTER_PI:
            raise ValueError(f"gamma_star={v} is not interior to (0, pi/4)")
        return v


class AmplificationReport(BaseModel):
    amplified: bool
    min_point: Optional[VariationPoint] = None
    gain: Optional[float] = None
    variation_count: int = 0

    @model_validator(mode="after")
    def _check_gain(self) -> "AmplificationReport":
        if self.amplified and (self.gain is None or self.gain <= EPS_AMP):
            raise ValueError("an amplified report needs gain > eps_amp")
        return self


class ThresholdResult(BaseModel):
    """Outcome of the amplification threshold search in alpha.

    Exactly one of ``alpha_star`` and ``non_monotone_bracket`` is set when a
    boundary exists; both are None when the predicate is constant on the scan.
    """

    q_r: float
    family: Family = Family.PHI_PLUS
    tol: float
    alpha_star: Optional[float] = None
    non_monotone_bracket: Optional[Tuple[float, float]] = None
    amplified_everywhere: bool = False

    @property
    def found(self) -> bool:
        return self.alpha_star is not None


class CheckResult(BaseModel):
    name: str
    passed: bool
    max_error: float = 0.0
    detail: str = ""


class VerifyReport(BaseModel):
    passed: bool
    checks: List[CheckResult]


class RunConfig(BaseModel):
    """A fully parsed CLI invocation."""

    command: Command
    family: Optional[Family] = None
    alpha: Optional[float] = None
    fidelity: Optional[float] = None
    q_r: float = INV_SQRT2
    gamma: Optional[float] = None
    grid_n: int = Field(default=2001, ge=3)
    format: Optional[OutputFormat] = None
    output: Optional[Path] = None
    ordering: Ordering = Ordering.PHYSICAL
    provenance: Provenance = Provenance.ORACLE
    sweep_values: List[float] = Field(default_factory=list)
    refine_tol: float = Field(default=1e-8, gt=0)
    tol_alpha: float = Field(default=1e-4, gt=0)
    scan_points: int = Field(default=64, ge=2)
    draws: int = Field(default=1000, ge=1)
    seed: int = 2011

    @model_validator(mode="after")
    def _check_required(self) -> "RunConfig":
        if self.command in (Command.VERIFY,):
            return self
        if self.family is None:
            raise ValueError(f"{self.command.value} requires --state")
        if self.command == Command.THRESHOLD:
            if self.family.is_mixed:
                raise ValueError("threshold search is defined for pure families only")
            _build_params(q_r=self.q_r)
            return self
        if self.command == Command.SWEEP:
            if not self.sweep_values:
                raise ValueError("sweep requires --values")
            for value in self.sweep_values:
                _build_params(q_r=self.q_r, **{self.family.parameter: value})
            return self
        if getattr(self, self.family.parameter) is None:
            flag = "--fidelity" if self.family.is_mixed else "--alpha"
            raise ValueError(f"{self.family.value} requires {flag}")
        if self.command == Command.MATRIX and self.gamma is None:
            raise ValueError("matrix requires --gamma or --acceleration")
        if self.provenance != Provenance.ORACLE and self.family == Family.PHI_MINUS:
            raise ValueError("no closed form is available for phi_minus")
        if self.provenance == Provenance.PRINTED and self.ordering != Ordering.PHYSICAL:
            raise ValueError("printed matrices exist in physical ordering only")
        self.state_params()
        return self

    @property
    def output_format(self) -> OutputFormat:
        """Explicit --format, else CSV for tabular commands and JSON for the rest."""
        if self.format is not None:
            return self.format
        tabular = (Command.CURVE, Command.MATRIX, Command.SWEEP)
        return OutputFormat.CSV if self.command in tabular else OutputFormat.JSON

    def state_params(self) -> StateParams:
        """Build (and range-check) the StateParams this run describes."""
        values = {"q_r": self.q_r, "gamma": self.gamma}
        if self.family is not None:
            values[self.family.parameter] = getattr(self, self.family.parameter)
        return _build_params(**values)


def _build_params(**values) -> StateParams:
    """StateParams constructor that reports the first failure on one line."""
    try:
        return StateParams(**values)
    except ValidationError as exc:
        message = exc.errors()[0]["msg"].removeprefix("Value error, ")
        raise ValueError(message) from None
