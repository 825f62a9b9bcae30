"""Delimited output with reproducible formatting.

Every table is written with fixed headers, '\\n' line endings, and floats
rendered by %.17g so repeated runs of the same inputs produce byte-identical
files.  Builders return (header, rows) pairs; `write_table` does the I/O.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = [
    "format_cell",
    "write_table",
    "potential_table",
    "field_table",
    "bloch_table",
    "phase_table",
    "sweep_table",
    "check_table",
]


def format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def write_table(path, header, rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(
                f"row width {len(row)} does not match header width {len(header)}"
            )
        lines.append(",".join(format_cell(c) for c in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def potential_table(x, q, v):
    """Fixed five-column schema; columns beyond the channel count are zero."""
    header = ["x", "q", "V11", "V12", "V22"]
    two = v.shape[-1] > 1
    rows = [
        (
            xi,
            qi,
            vi[0, 0],
            vi[0, 1] if two else 0.0,
            vi[1, 1] if two else 0.0,
        )
        for xi, qi, vi in zip(x, q, v)
    ]
    return header, rows


def field_table(profile):
    header = ["x", "omega_bar", "theta_bar", "omega_dressed", "theta_dressed"]
    rows = list(
        zip(
            profile.x,
            profile.omega_bar,
            profile.theta_bar,
            profile.omega_dressed,
            profile.theta_dressed,
        )
    )
    return header, rows


def bloch_table(t_values, x_values, b_values):
    """b_values has shape (n_t, n_x, 3); rows ordered t-major."""
    header = ["t", "x", "B1", "B2", "B3"]
    rows = [
        (t, x, b[0], b[1], b[2])
        for t, bx in zip(t_values, b_values)
        for x, b in zip(x_values, bx)
    ]
    return header, rows


def phase_table(reports):
    header = ["state", "branch", "total", "dynamical", "geometric", "aa", "sigma3"]
    rows = [
        (r.state, r.branch, r.total, r.dynamical, r.geometric, r.anandan, r.sigma3)
        for r in reports
    ]
    return header, rows


def sweep_table(rows_in):
    header = ["omega_ratio", "geometric", "berry", "deviation"]
    rows = [(r.omega_ratio, r.geometric, r.berry, r.deviation) for r in rows_in]
    return header, rows


def check_table(results):
    header = ["check_name", "value", "tolerance", "pass"]
    rows = [(r.name, r.value, r.tolerance, r.passed) for r in results]
    return header, rows
