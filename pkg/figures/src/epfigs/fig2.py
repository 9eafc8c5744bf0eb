"""Figure 2: real and imaginary parts of the displaced eigenvalues."""

from __future__ import annotations

from pathlib import Path

import matplotlib.pyplot as plt

from .io import FigureSpec, load_table

SPECTRUM_COLUMNS = ("delta_r", "re_lp", "im_lp", "re_lm", "im_lm")


def build_fig2(spec: FigureSpec):
    """Two stacked panels of the eigenvalue branches vs detuning.

    Red diamonds mark the coalescence points at delta_r = +/-1, where both
    displaced branches vanish.
    """
    (path,) = spec.paths("spectrum")
    table = load_table(path, required=SPECTRUM_COLUMNS)
    d = table["delta_r"]

    fig, (ax_re, ax_im) = plt.subplots(2, 1, figsize=(5.0, 5.6), sharex=True)
    ax_re.plot(d, table["re_lp"], "b--", label=r"$\lambda_+$")
    ax_re.plot(d, table["re_lm"], "k-", label=r"$\lambda_-$")
    ax_re.set_ylabel(r"Re$[\lambda_\pm + i\gamma_b]$")
    ax_re.legend(frameon=False)

    ax_im.plot(d, table["im_lp"], "b--")
    ax_im.plot(d, table["im_lm"], "k-")
    ax_im.set_ylabel(r"Im$[\lambda_\pm + i\gamma_b]$")
    ax_im.set_xlabel(r"$\delta_r$")

    ep = spec.annotations.get("ep_detunings", (-1.0, 1.0))
    for ax in (ax_re, ax_im):
        ax.scatter(ep, [0.0] * len(ep), marker="D", s=45, color="red",
                   zorder=5, label="EP")
        ax.axhline(0.0, color="0.8", lw=0.6, zorder=0)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return fig


def render_fig2(spec: FigureSpec) -> Path:
    fig = build_fig2(spec)
    spec.out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out, dpi=200)
    plt.close(fig)
    return spec.out
