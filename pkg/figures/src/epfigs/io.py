"""Loading of the simulator's CSV tables and metadata sidecars."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class MissingInput(Exception):
    """An input file (CSV or sidecar) does not exist."""


class MissingColumn(Exception):
    """A required column is absent from a CSV table."""

    def __init__(self, column: str, path) -> None:
        super().__init__(f"missing column {column!r} in {path}")
        self.column = column
        self.path = path


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input tables, output path, optional annotations.

    ``inputs`` maps a role name (e.g. "spectrum", "phase", "dynamics",
    "tcrit") to the CSV paths filling that role, in panel order.
    """

    inputs: dict[str, tuple[Path, ...]]
    out: Path
    title: str | None = None
    annotations: dict = field(default_factory=dict)

    def paths(self, role: str) -> tuple[Path, ...]:
        return self.inputs.get(role, ())


def load_table(path, required: tuple[str, ...] = ()) -> dict[str, np.ndarray]:
    """Read a CSV into per-column arrays (floats where possible).

    Raises MissingInput / MissingColumn so callers can exit with the named
    missing piece.
    """
    path = Path(path)
    if not path.exists():
        raise MissingInput(f"missing input file {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingInput(f"empty input file {path}") from None
        rows = list(reader)
    for col in required:
        if col not in header:
            raise MissingColumn(col, path)
    table: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        values = [row[j] for row in rows]
        try:
            table[name] = np.array([float(v) for v in values])
        except ValueError:
            table[name] = np.array(values, dtype=object)
    return table


def load_sidecar(csv_path) -> dict:
    """Read the .meta.json sidecar written next to a CSV table."""
    csv_path = Path(csv_path)
    side = csv_path.with_name(csv_path.stem + ".meta.json")
    if not side.exists():
        raise MissingInput(f"missing metadata sidecar {side}")
    with open(side) as fh:
        return json.load(fh)
