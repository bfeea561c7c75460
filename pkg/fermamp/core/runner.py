"""Runner - executes one parsed invocation (RunConfig -> computation -> text).

The runner is stateless: it reads the config, computes, serializes, and
optionally writes the text to ``config.output``. Exit codes follow the CLI
contract: 0 on success, 1 when ``verify`` finds a violated invariant.
"""

import logging
from typing import Callable, Dict, Tuple

from pydantic import BaseModel

from ..schema import Command, OutputFormat, Provenance, RunConfig
from ..storage import (
    format_curve,
    format_matrix,
    format_sweep,
    format_threshold,
    format_variation,
    format_verify,
    write_output,
)
from .analysis import amplification_threshold, negativity_curve, variation_points
from .families import get_family
from .reduction import ReducedState, closed_form_reduced, trace_out_region_II
from .verify import run_checks


logger = logging.getLogger(__name__)


class RunOutcome(BaseModel):
    exit_code: int
    text: str


def _curve(config: RunConfig) -> Tuple[int, str]:
    curve = negativity_curve(config.family, config.state_params(), config.grid_n, config.ordering)
    return 0, format_curve(curve, config.output_format)


def reduced_state(config: RunConfig) -> ReducedState:
    """The reduced matrix a ``matrix`` invocation asks for."""
    params = config.state_params()
    if config.provenance == Provenance.ORACLE:
        density = get_family(config.family).density(params, params.gamma)
        return trace_out_region_II(density, config.ordering)
    printed = config.provenance == Provenance.PRINTED
    return closed_form_reduced(config.family, params, config.ordering, printed=printed)


def _matrix(config: RunConfig) -> Tuple[int, str]:
    return 0, format_matrix(reduced_state(config), config.output_format)


def _variation(config: RunConfig) -> Tuple[int, str]:
    curve = negativity_curve(config.family, config.state_params(), config.grid_n, config.ordering)
    points = variation_points(curve, config.refine_tol)
    return 0, format_variation(points, config.output_format)


def _threshold(config: RunConfig) -> Tuple[int, str]:
    result = amplification_threshold(
        config.q_r,
        tol_alpha=config.tol_alpha,
        family=config.family,
        grid_n=config.grid_n,
        scan_points=config.scan_points,
        ordering=config.ordering,
        refine_tol=config.refine_tol,
    )
    return 0, format_threshold(result)


def _verify(config: RunConfig) -> Tuple[int, str]:
    report = run_checks(config.draws, config.seed, config.ordering)
    failed = [c.name for c in report.checks if not c.passed]
    if failed:
        logger.error("verification failed: %s", ", ".join(failed))
    return (0 if report.passed else 1), format_verify(report)


def _sweep(config: RunConfig) -> Tuple[int, str]:
    parameter = config.family.parameter
    rows = []
    for value in config.sweep_values:
        params = config.model_copy(update={parameter: value}).state_params()
        curve = negativity_curve(config.family, params, config.grid_n, config.ordering)
        points = variation_points(curve, config.refine_tol)
        logger.debug("sweep %s=%.6f: %d variation points", parameter, value, len(points))
        rows.append((value, points))
    return 0, format_sweep(rows, config.output_format)


_HANDLERS: Dict[Command, Callable[[RunConfig], Tuple[int, str]]] = {
    Command.CURVE: _curve,
    Command.MATRIX: _matrix,
    Command.VARIATION: _variation,
    Command.THRESHOLD: _threshold,
    Command.VERIFY: _verify,
    Command.SWEEP: _sweep,
}


def run(config: RunConfig) -> RunOutcome:
    """Execute ``config`` and return its exit code and serialized output.

    Raises:
        ParameterRangeError: If a physical parameter is out of range.
        ValueError: For combinations the library rejects.
    """
    exit_code, text = _HANDLERS[config.command](config)
    if config.output is not None:
        write_output(config.output, text)
        logger.debug("wrote %d bytes to %s", len(text), config.output)
    return RunOutcome(exit_code=exit_code, text=text)
