"""CLI interface - the primary user interface for fermamp.

Data goes to stdout (or --output); diagnostics and errors go to stderr.
Angles are in radians: pi/4 ~ 0.7853981634, 1/sqrt(2) ~ 0.7071067812.
"""

import logging
from typing import List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from . import __version__
from .config import Config, load_config
from .core.analysis import gamma_of_acceleration
from .core.entanglement import SpectrumError
from .core.runner import run
from .schema import Command, Family, OutputFormat, Ordering, Provenance, RunConfig

app = typer.Typer(
    name="fermamp",
    help="Entanglement amplification of fermionic states under the Unruh effect",
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_FAILED = 1
EXIT_USAGE = 2


def _fail(message: str, code: int = EXIT_USAGE) -> None:
    err_console.print(f"[red]Error:[/red] {escape(message)}")
    raise typer.Exit(code)


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    message = error["msg"].removeprefix("Value error, ")
    location = ".".join(str(part) for part in error.get("loc", ()))
    return f"{location}: {message}" if location else message


def _setup_logging(level: str) -> None:
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


@app.callback()
def main_callback(
    ctx: typer.Context,
    verbose: bool = typer.Option(
        False,
        "--verbose", "-v",
        help="Log debug progress to stderr",
    ),
):
    """Negativity of Alice + Bob-region-I states versus acceleration."""
    try:
        config = load_config()
    except ValidationError as e:
        _fail(f"invalid configuration: {_first_error(e)}")
    _setup_logging("DEBUG" if verbose else config.log_level)
    ctx.obj = config


def _state_option():
    return typer.Option(
        None,
        "--state", "-s",
        help="State family: phi-plus, phi-minus, phi-star, werner, werner-like",
    )


def _alpha_option():
    return typer.Option(None, "--alpha", "-a", help="Entanglement angle in radians, [0, pi/2] (pi/4 ~ 0.7853981634)")


def _fidelity_option():
    return typer.Option(None, "--fidelity", "-F", help="Werner fidelity F in [0, 1]")


def _qr_option():
    return typer.Option(None, "--qr", help="Unruh weight q_R in [0, 1] (1/sqrt(2) ~ 0.7071067812)")


def _grid_option():
    return typer.Option(None, "--grid", "-n", help="Points on the uniform gamma grid over [0, pi/4]")


def _format_option():
    return typer.Option(None, "--format", "-f", help="Output format (csv or json)")


def _output_option():
    return typer.Option(None, "--output", "-o", help="Write to this file instead of stdout")


def _ordering_option():
    return typer.Option(None, "--ordering", help="Mode ordering for the region-II trace (physical or product)")


def _refine_option():
    return typer.Option(None, "--refine-tol", help="Bracket width of refined variation points")


def _parse_provenance(value: str) -> Provenance:
    try:
        return Provenance(value.strip().lower().replace("-", "_"))
    except ValueError:
        raise ValueError(f"unknown provenance: {value} (oracle, closed-form or printed)") from None


def _parse_values(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"--values must be comma-separated numbers, got {text!r}") from None


def _execute(ctx: typer.Context, command: Command, **fields) -> None:
    """Build the RunConfig from flags + config, run it and emit the output."""
    config: Config = ctx.obj
    fields = {k: v for k, v in fields.items() if v is not None}
    fields.setdefault("q_r", config.default_q_r)
    fields.setdefault("grid_n", config.grid_n)
    fields.setdefault("refine_tol", config.refine_tol)
    fields.setdefault("tol_alpha", config.tol_alpha)
    fields.setdefault("scan_points", config.threshold_scan_points)
    fields.setdefault("ordering", config.ordering)
    fields.setdefault("draws", config.verify_draws)
    fields.setdefault("seed", config.verify_seed)

    try:
        if "family" in fields:
            fields["family"] = Family.parse(fields["family"])
        if "provenance" in fields:
            fields["provenance"] = _parse_provenance(fields["provenance"])
        run_config = RunConfig(command=command, **fields)
        outcome = run(run_config)
    except ValidationError as e:
        _fail(_first_error(e))
    except SpectrumError as e:
        _fail(str(e), EXIT_FAILED)
    except ValueError as e:
        _fail(str(e))

    if run_config.output is None:
        typer.echo(outcome.text, nl=False)
    else:
        err_console.print(f"[green]Wrote:[/green] {run_config.output}")
    if outcome.exit_code:
        raise typer.Exit(outcome.exit_code)


@app.command()
def curve(
    ctx: typer.Context,
    state: Optional[str] = _state_option(),
    alpha: Optional[float] = _alpha_option(),
    fidelity: Optional[float] = _fidelity_option(),
    qr: Optional[float] = _qr_option(),
    grid: Optional[int] = _grid_option(),
    fmt: Optional[OutputFormat] = _format_option(),
    output: Optional[str] = _output_option(),
    ordering: Optional[Ordering] = _ordering_option(),
):
    """Negativity on a uniform gamma grid (CSV gamma,negativity)."""
    _execute(
        ctx, Command.CURVE,
        family=state, alpha=alpha, fidelity=fidelity, q_r=qr,
        grid_n=grid, format=fmt, output=output, ordering=ordering,
    )


@app.command()
def matrix(
    ctx: typer.Context,
    state: Optional[str] = _state_option(),
    alpha: Optional[float] = _alpha_option(),
    fidelity: Optional[float] = _fidelity_option(),
    qr: Optional[float] = _qr_option(),
    gamma: Optional[float] = typer.Option(None, "--gamma", "-g", help="Acceleration parameter in radians, [0, pi/4]"),
    acceleration: Optional[float] = typer.Option(None, "--acceleration", help="Proper acceleration a > 0 (instead of --gamma)"),
    omega: float = typer.Option(1.0, "--omega", help="Mode frequency Omega, used with --acceleration"),
    c: float = typer.Option(1.0, "--c", help="Speed of light, used with --acceleration"),
    provenance: str = typer.Option("oracle", "--provenance", "-p", help="oracle, closed-form or printed"),
    fmt: Optional[OutputFormat] = _format_option(),
    output: Optional[str] = _output_option(),
    ordering: Optional[Ordering] = _ordering_option(),
):
    """The 8x8 reduced matrix over |a p m> at one gamma."""
    if acceleration is not None:
        if gamma is not None:
            _fail("give either --gamma or --acceleration, not both")
        try:
            gamma = gamma_of_acceleration(acceleration, omega, c)
        except ValueError as e:
            _fail(str(e))
        logger.debug("a=%g Omega=%g c=%g -> gamma=%.12f", acceleration, omega, c, gamma)
    _execute(
        ctx, Command.MATRIX,
        family=state, alpha=alpha, fidelity=fidelity, q_r=qr, gamma=gamma,
        provenance=provenance, format=fmt, output=output, ordering=ordering,
    )


@app.command()
def variation(
    ctx: typer.Context,
    state: Optional[str] = _state_option(),
    alpha: Optional[float] = _alpha_option(),
    fidelity: Optional[float] = _fidelity_option(),
    qr: Optional[float] = _qr_option(),
    grid: Optional[int] = _grid_option(),
    refine_tol: Optional[float] = _refine_option(),
    fmt: Optional[OutputFormat] = _format_option(),
    output: Optional[str] = _output_option(),
    ordering: Optional[Ordering] = _ordering_option(),
):
    """Interior extrema of the negativity curve (JSON list)."""
    _execute(
        ctx, Command.VARIATION,
        family=state, alpha=alpha, fidelity=fidelity, q_r=qr, grid_n=grid,
        refine_tol=refine_tol, format=fmt, output=output, ordering=ordering,
    )


@app.command()
def threshold(
    ctx: typer.Context,
    state: str = typer.Option("phi-plus", "--state", "-s", help="Pure state family to search"),
    qr: Optional[float] = _qr_option(),
    tol: Optional[float] = typer.Option(None, "--tol", help="Bisection tolerance in alpha"),
    scan_points: Optional[int] = typer.Option(None, "--scan-points", help="Alphas in the monotonicity pre-scan"),
    grid: Optional[int] = _grid_option(),
    output: Optional[str] = _output_option(),
    ordering: Optional[Ordering] = _ordering_option(),
):
    """Smallest alpha above which the curve shows amplification (JSON)."""
    _execute(
        ctx, Command.THRESHOLD,
        family=state, q_r=qr, tol_alpha=tol, scan_points=scan_points,
        grid_n=grid, output=output, ordering=ordering,
    )


@app.command()
def verify(
    ctx: typer.Context,
    draws: Optional[int] = typer.Option(None, "--draws", help="Random draws per check"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed of the random generator"),
    output: Optional[str] = _output_option(),
    ordering: Optional[Ordering] = _ordering_option(),
):
    """Run the invariant suites; exit 1 if any check fails."""
    _execute(ctx, Command.VERIFY, draws=draws, seed=seed, output=output, ordering=ordering)


@app.command()
def sweep(
    ctx: typer.Context,
    state: Optional[str] = _state_option(),
    values: str = typer.Option(..., "--values", help="Comma-separated alphas (pure) or fidelities (mixed)"),
    qr: Optional[float] = _qr_option(),
    grid: Optional[int] = _grid_option(),
    refine_tol: Optional[float] = _refine_option(),
    fmt: Optional[OutputFormat] = _format_option(),
    output: Optional[str] = _output_option(),
    ordering: Optional[Ordering] = _ordering_option(),
):
    """Variation points for each parameter value (CSV param,count,gamma_1,kind_1,...)."""
    try:
        sweep_values = _parse_values(values)
    except ValueError as e:
        _fail(str(e))
    _execute(
        ctx, Command.SWEEP,
        family=state, sweep_values=sweep_values, q_r=qr, grid_n=grid,
        refine_tol=refine_tol, format=fmt, output=output, ordering=ordering,
    )


@app.command()
def version():
    """Show the fermamp version."""
    console.print(f"fermamp {__version__}")


def main():
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
