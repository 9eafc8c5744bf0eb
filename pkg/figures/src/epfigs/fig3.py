"""Figure 3: phase diagrams with the transition boundary, plus the energy
and charging-rate dynamics at marked parameter points."""

from __future__ import annotations

from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

from .io import FigureSpec, load_sidecar, load_table

PHASE_COLUMNS = ("delta_r", "alpha", "growth", "regime")
DYNAMICS_COLUMNS = ("point", "delta_r", "alpha", "t", "energy", "power_norm")


def _phase_panel(ax, table, meta):
    d = np.unique(table["delta_r"])
    a = np.unique(table["alpha"])
    growth = table["growth"].reshape(len(a), len(d))
    mesh = ax.pcolormesh(d, a, growth, cmap="RdBu_r", shading="nearest",
                         vmin=-np.max(np.abs(growth)),
                         vmax=np.max(np.abs(growth)))
    boundary = np.asarray(meta.get("boundary", []), dtype=float)
    if boundary.size:
        order = np.argsort(boundary[:, 0])
        ax.plot(boundary[order, 0], boundary[order, 1], "k--", lw=1.4,
                label="boundary")
        # star the boundary point at zero detuning
        i0 = int(np.argmin(np.abs(boundary[:, 0])))
        ax.plot([boundary[i0, 0]], [boundary[i0, 1]], marker="*",
                markersize=13, color="purple", linestyle="none", zorder=6)
    eps = np.asarray(meta.get("ep_points", []), dtype=float)
    if eps.size:
        ax.scatter(eps[:, 0], eps[:, 1], marker="D", s=45, color="red",
                   zorder=6, label="EP")
    ax.set_xlabel(r"$\delta_r$")
    ax.set_ylabel(r"$\alpha$")
    ax.set_title(rf"$\gamma_b = {meta.get('gamma_b', float('nan')):g}$")
    return mesh


def _dynamics_panels(ax_e, ax_p, table):
    points = np.unique(table["point"]).astype(int)
    for k in points:
        mask = table["point"].astype(int) == k
        t = table["t"][mask]
        alpha = table["alpha"][mask][0]
        label = rf"$\alpha = {alpha:g}$"
        ax_e.plot(t, table["energy"][mask], label=label)
        ax_p.plot(t, table["power_norm"][mask], label=label)
    ax_e.set_yscale("log")
    ax_e.set_ylabel(r"$E_B / \mathcal{E}_r^2$")
    ax_p.set_ylabel(r"$P_B / \mathcal{E}_r^2$")
    ax_p.set_xlabel(r"$t$")
    ax_e.legend(frameon=False, fontsize=8)


def build_fig3(spec: FigureSpec):
    """Phase-map row plus (optionally) energy and power rows below it.

    Inputs are matched by position: the k-th dynamics table sits under the
    k-th phase map.  Phase maps need their .meta.json sidecars for the
    boundary polyline and EP markers.
    """
    phase_paths = spec.paths("phase")
    dyn_paths = spec.paths("dynamics")
    if not phase_paths:
        raise ValueError("figure 3 needs at least one phase table")
    if dyn_paths and len(dyn_paths) != len(phase_paths):
        raise ValueError("need one dynamics table per phase table, got "
                         f"{len(dyn_paths)} for {len(phase_paths)}")
    ncols = len(phase_paths)
    nrows = 3 if dyn_paths else 1
    fig, axes = plt.subplots(nrows, ncols,
                             figsize=(3.6 * ncols, 3.0 * nrows),
                             squeeze=False)
    for k, path in enumerate(phase_paths):
        table = load_table(path, required=PHASE_COLUMNS)
        meta = load_sidecar(path)
        mesh = _phase_panel(axes[0, k], table, meta)
        fig.colorbar(mesh, ax=axes[0, k],
                     label=r"Re$[-i\lambda_+]$" if k == ncols - 1 else None)
    for k, path in enumerate(dyn_paths):
        table = load_table(path, required=DYNAMICS_COLUMNS)
        _dynamics_panels(axes[1, k], axes[2, k], table)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return fig


def render_fig3(spec: FigureSpec) -> Path:
    fig = build_fig3(spec)
    spec.out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out, dpi=200)
    plt.close(fig)
    return spec.out
