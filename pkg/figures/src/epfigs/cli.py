"""Command-line wrapper: one subcommand per figure.

Inputs are CSV tables from the simulator CLI; roles are inferred from each
table's columns (phase maps carry a growth column, dynamics tables an energy
column), so every subcommand keeps the plain ``--in <csv...> --out <image>``
shape.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .fig2 import render_fig2
from .fig3 import render_fig3
from .io import FigureSpec, MissingColumn, MissingInput
from .tcrit import render_tcrit


def _columns(path: Path) -> list[str]:
    if not path.exists():
        raise MissingInput(f"missing input file {path}")
    with open(path, newline="") as fh:
        try:
            return next(csv.reader(fh))
        except StopIteration:
            raise MissingInput(f"empty input file {path}") from None


def _spec_fig2(inputs: list[Path], out: Path, title) -> FigureSpec:
    if len(inputs) != 1:
        raise ValueError("fig2 takes exactly one spectrum table")
    return FigureSpec(inputs={"spectrum": tuple(inputs)}, out=out,
                      title=title)


def _spec_fig3(inputs: list[Path], out: Path, title) -> FigureSpec:
    phase, dynamics = [], []
    for path in inputs:
        cols = _columns(path)
        if "growth" in cols:
            phase.append(path)
        elif "energy" in cols:
            dynamics.append(path)
        else:
            raise ValueError(f"{path} is neither a phase map nor a dynamics "
                             "table (no growth or energy column)")
    return FigureSpec(inputs={"phase": tuple(phase),
                              "dynamics": tuple(dynamics)},
                      out=out, title=title)


def _spec_tcrit(inputs: list[Path], out: Path, title) -> FigureSpec:
    if len(inputs) != 1:
        raise ValueError("tcrit takes exactly one critical-time table")
    return FigureSpec(inputs={"tcrit": tuple(inputs)}, out=out, title=title)


_FIGURES = {
    "fig2": (_spec_fig2, render_fig2),
    "fig3": (_spec_fig3, render_fig3),
    "tcrit": (_spec_tcrit, render_tcrit),
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="epfigs",
        description="Render the charger-battery figures from simulator CSVs.")
    sub = parser.add_subparsers(dest="figure", required=True)
    for name in _FIGURES:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="inputs", nargs="+", required=True,
                       type=Path, help="input CSV table(s)")
        p.add_argument("--out", required=True, type=Path,
                       help="output image path")
        p.add_argument("--title", default=None)
    args = parser.parse_args(argv)

    build_spec, render = _FIGURES[args.figure]
    try:
        spec = build_spec(args.inputs, args.out, args.title)
        render(spec)
    except (MissingColumn, MissingInput, ValueError) as exc:
        print(f"epfigs: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
