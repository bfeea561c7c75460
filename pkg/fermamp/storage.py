"""Text serialization of results and atomic file output.

Every formatter is a pure function of its input model, so identical runs
produce byte-identical output.
"""

import json
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from .core.fock_basis import REDUCED_DIM, reduced_label
from .core.reduction import ReducedState
from .schema import Curve, OutputFormat, ThresholdResult, VariationPoint, VerifyReport


BASIS_HEADER = "# basis |apm>: " + " ".join(reduced_label(i) for i in range(REDUCED_DIM))
CSV_DIGITS = 12
MATRIX_DIGITS = 15


def _dumps(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _significant(value: float, digits: int = CSV_DIGITS) -> str:
    """Positional decimal with ``digits`` significant digits."""
    return np.format_float_positional(value + 0.0, precision=digits, unique=False, fractional=False)


def format_curve(curve: Curve, fmt: OutputFormat = OutputFormat.CSV) -> str:
    """CSV ``gamma,negativity`` with a header row, or the full curve as JSON."""
    if fmt == OutputFormat.JSON:
        return _dumps(curve.model_dump(mode="json", exclude_none=True))
    lines = ["gamma,negativity"]
    lines.extend(f"{_significant(g)},{_significant(v)}" for g, v in zip(curve.grid, curve.values))
    return "\n".join(lines) + "\n"


def format_matrix(state: ReducedState, fmt: OutputFormat = OutputFormat.CSV) -> str:
    """Row-major 8x8 dump with basis, provenance and correction headers."""
    rows = state.entries.tolist()
    if fmt == OutputFormat.JSON:
        return _dumps({
            "basis": [reduced_label(i) for i in range(REDUCED_DIM)],
            "provenance": state.provenance.value,
            "ordering": state.ordering.value,
            "corrections": [c.model_dump() for c in state.corrections],
            "matrix": rows,
        })
    lines = [
        BASIS_HEADER,
        f"# provenance: {state.provenance.value}",
        f"# ordering: {state.ordering.value}",
    ]
    for correction in state.corrections:
        lines.append(f"# corrected {correction.entry}: printed {correction.printed} -> {correction.corrected}")
    lines.extend(" ".join(_significant(x, MATRIX_DIGITS) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def format_variation(points: Sequence[VariationPoint], fmt: OutputFormat = OutputFormat.JSON) -> str:
    if fmt == OutputFormat.CSV:
        lines = ["gamma_star,kind,value"]
        lines.extend(f"{_significant(p.gamma_star)},{p.kind},{_significant(p.value)}" for p in points)
        return "\n".join(lines) + "\n"
    return _dumps([p.model_dump() for p in points])


def format_threshold(result: ThresholdResult) -> str:
    """{q_r, alpha_star, tol} on success, {q_r, non_monotone_bracket, tol} otherwise."""
    data = {"q_r": result.q_r, "family": result.family.value}
    if result.non_monotone_bracket is not None:
        data["non_monotone_bracket"] = list(result.non_monotone_bracket)
    else:
        data["alpha_star"] = result.alpha_star
        if not result.found:
            data["amplified_everywhere"] = result.amplified_everywhere
    data["tol"] = result.tol
    return _dumps(data)


def format_verify(report: VerifyReport) -> str:
    return _dumps(report.model_dump())


SweepRow = Tuple[float, List[VariationPoint]]


def format_sweep(rows: Sequence[SweepRow], fmt: OutputFormat = OutputFormat.CSV) -> str:
    """CSV ``param,count,gamma_1,kind_1,...`` padded to the widest row."""
    if fmt == OutputFormat.JSON:
        return _dumps([
            {"param": param, "count": len(points), "points": [p.model_dump() for p in points]}
            for param, points in rows
        ])
    width = max((len(points) for _, points in rows), default=0)
    header = ["param", "count"]
    for i in range(1, width + 1):
        header.extend([f"gamma_{i}", f"kind_{i}"])
    lines = [",".join(header)]
    for param, points in rows:
        cells = [_significant(param), str(len(points))]
        for point in points:
            cells.extend([_significant(point.gamma_star), point.kind])
        cells.extend([""] * (2 * (width - len(points))))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_output(path: Union[str, Path], text: str) -> Path:
    """Write ``text`` to ``path`` atomically via a temp file in the same directory."""
    path = Path(path)
    temp_path = path.with_name(path.name + ".tmp")

    with open(temp_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)

    temp_path.replace(path)
    return path
