"""Deterministic CSV emission and template coefficient files.

All floats are written with ``repr``, the shortest round-trip representation,
so a given value always serializes to the same bytes and files diff cleanly
across runs.  Files are written with ``\n`` line endings regardless of
platform.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError, InvariantViolationError
from .selection import CutoffSelection
from .spectral import Template

__all__ = [
    "format_cell",
    "write_csv",
    "write_curves_csv",
    "write_selection_csv",
    "write_risk_report_csv",
    "write_rate_study_csv",
    "write_template_csv",
    "read_template_csv",
]


def format_cell(value) -> str:
    """Canonical text for one CSV cell."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    raise InvalidParameterError(f"cannot format {type(value).__name__} into a CSV cell")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write one CSV file; returns the path."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
    return path


def write_curves_csv(path, grid: np.ndarray, curves: np.ndarray) -> Path:
    """Rendered curves, one row per curve; the header carries the abscissae."""
    curves = np.atleast_2d(curves)
    if curves.shape[1] != len(grid):
        raise InvalidParameterError(
            f"curves have {curves.shape[1]} columns but grid has {len(grid)} points"
        )
    header = [format_cell(float(x)) for x in grid]
    return write_csv(path, header, ([float(v) for v in row] for row in curves))


def write_selection_csv(path, selection: CutoffSelection) -> Path:
    """Criterion trace of one cutoff selection: rows of (N, criterion value)."""
    rows = [(int(n), float(v)) for n, v in enumerate(selection.criterion_values)]
    return write_csv(path, ["n", "criterion"], rows)


def write_risk_report_csv(path, report) -> Path:
    """Risk curves: one row per cutoff."""
    rows = (
        (n, float(report.bias[n]), float(report.v1[n]), float(report.v2[n]),
         float(report.r[n]), float(report.r_bar[n]), float(report.r_tilde[n]))
        for n in range(report.n_max + 1)
    )
    return write_csv(path, ["n", "bias", "v1", "v2", "r", "r_bar", "r_tilde"], rows)


def write_rate_study_csv(path, study) -> Path:
    """Rate table: one row per sample size."""
    rows = (
        (int(n), float(m), float(se))
        for n, m, se in zip(study.n_grid, study.mise, study.mise_stderr)
    )
    return write_csv(path, ["n", "mise", "stderr"], rows)


def write_template_csv(path, template: Template) -> Path:
    """Coefficient table of a template: rows of (k, re, im)."""
    rows = (
        (int(k), float(c.real), float(c.imag))
        for k, c in zip(template.k_values, template.coeffs)
    )
    return write_csv(path, ["k", "re", "im"], rows)


def read_template_csv(path) -> Template:
    """Load a coefficient table written by :func:`write_template_csv`.

    The file must list every frequency ``-k_max..k_max`` exactly once and the
    coefficients must form an exactly Hermitian (real-valued) spectrum.
    """
    path = Path(path)
    entries = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["k", "re", "im"]:
            raise InvalidParameterError(
                f"{path}: expected header 'k,re,im', got {header!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise InvalidParameterError(f"{path}:{lineno}: expected 3 columns")
            try:
                k = int(row[0])
                value = complex(float(row[1]), float(row[2]))
            except ValueError as exc:
                raise InvalidParameterError(f"{path}:{lineno}: {exc}") from None
            if k in entries:
                raise InvalidParameterError(f"{path}:{lineno}: duplicate frequency k={k}")
            entries[k] = value
    if not entries:
        raise InvalidParameterError(f"{path}: no coefficient rows")
    k_max = max(abs(k) for k in entries)
    if k_max < 1:
        raise InvalidParameterError(f"{path}: need at least frequencies -1..1")
    expected = set(range(-k_max, k_max + 1))
    missing = expected - set(entries)
    if missing:
        raise InvalidParameterError(
            f"{path}: missing frequencies {sorted(missing)[:5]} (band is -{k_max}..{k_max})"
        )
    coeffs = np.array([entries[k] for k in range(-k_max, k_max + 1)],
                      dtype=np.complex128)
    try:
        return Template(coeffs=coeffs, k_max=k_max, real_valued=True, label=str(path.stem))
    except InvariantViolationError as exc:
        raise InvalidParameterError(f"{path}: {exc}") from None
