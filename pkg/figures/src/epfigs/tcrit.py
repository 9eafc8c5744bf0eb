"""Critical-time figure: safe operating window vs detuning with the stable
phase shaded."""

from __future__ import annotations

from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, load_table

TCRIT_COLUMNS = ("delta_r", "t_asym", "t_exact", "e_scale", "stable")


def stable_spans(delta_r: np.ndarray, stable: np.ndarray
                 ) -> list[tuple[float, float]]:
    """Contiguous detuning intervals flagged stable, as (lo, hi) pairs."""
    spans = []
    start = None
    for i, flag in enumerate(stable.astype(bool)):
        if flag and start is None:
            start = delta_r[i]
        elif not flag and start is not None:
            spans.append((float(start), float(delta_r[i - 1])))
            start = None
    if start is not None:
        spans.append((float(start), float(delta_r[-1])))
    return spans


def build_tcrit(spec: FigureSpec):
    """Exact and envelope critical times; green shading marks the stable phase.

    The curves drop sharply next to the phase boundary, where the envelope
    prefactor blows up and the threshold is met almost immediately.
    """
    (path,) = spec.paths("tcrit")
    table = load_table(path, required=TCRIT_COLUMNS)
    d = table["delta_r"]

    fig, ax = plt.subplots(figsize=(5.4, 3.6))
    ax.plot(d, table["t_exact"], "k-", lw=1.6, label=r"$t_\mathrm{crit}$ (exact)")
    ax.plot(d, table["t_asym"], "b--", lw=1.2,
            label=r"$t_\mathrm{crit}$ (envelope)")
    for lo, hi in stable_spans(d, table["stable"]):
        ax.axvspan(lo, hi, color="green", alpha=0.18, lw=0)
    ax.set_xlabel(r"$\delta_r$")
    ax.set_ylabel(r"$t_\mathrm{crit}$")
    ax.set_xlim(float(d[0]), float(d[-1]))
    ax.legend(frameon=False)
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    return fig


def render_tcrit(spec: FigureSpec) -> Path:
    fig = build_tcrit(spec)
    spec.out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out, dpi=200)
    plt.close(fig)
    return spec.out
