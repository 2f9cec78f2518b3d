"""Plain-text CSV output for fields and tables (17 significant digits)."""

import csv
from pathlib import Path

import numpy as np

from .euler import VARIABLES

DIGITS = 17


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.{DIGITS}g}"


def variable_names(nvar):
    return VARIABLES.get(nvar, ("u",) if nvar == 1 else tuple(f"v{i}" for i in range(nvar)))


def field_rows(grid, field):
    """Header and rows of a field dump; x is the outer loop in 2D."""
    field = np.asarray(field, dtype=float)
    names = variable_names(field.shape[0])
    if grid.dims == 1:
        header = ("x",) + names
        x = grid.centers(0)
        rows = [[x[i], *field[:, i]] for i in range(grid.n[0])]
    else:
        header = ("x", "y") + names
        x, y = grid.centers(0), grid.centers(1)
        rows = [
            [x[i], y[j], *field[:, i, j]]
            for i in range(grid.n[0])
            for j in range(grid.n[1])
        ]
    return header, rows


def write_field(path, grid, field):
    header, rows = field_rows(grid, field)
    write_table(path, header, rows)


def read_field(path):
    """Return ``(header, array)`` of a dump; the array has one row per cell."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        data = np.array([[float(v) for v in row] for row in reader])
    return header, data


def write_table(target, header, rows):
    """Write to a path or an open text stream."""
    if hasattr(target, "write"):
        _write(target, header, rows)
        return
    with open(Path(target), "w", newline="", encoding="utf-8") as fh:
        _write(fh, header, rows)


def _write(fh, header, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
