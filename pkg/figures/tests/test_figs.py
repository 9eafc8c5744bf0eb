"""Figure-package tests.

Input tables are produced by driving the installed ``epcharge`` CLI as a
subprocess, which is the only interface this package consumes.
"""

import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from matplotlib.collections import PathCollection
from matplotlib.lines import Line2D

from epfigs import FigureSpec, MissingColumn, MissingInput
from epfigs.cli import main as figs_main
from epfigs.fig2 import build_fig2
from epfigs.fig3 import build_fig3
from epfigs.io import load_table
from epfigs.tcrit import build_tcrit, stable_spans

GAMMAS = (0.5, 1.0, 1.5)


def run_epcharge(command, config, out_path):
    cfg_path = out_path.parent / (out_path.stem + ".config.json")
    cfg_path.write_text(json.dumps(config))
    proc = subprocess.run(
        [sys.executable, "-m", "epcharge", command,
         "--config", str(cfg_path), "--out", str(out_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return out_path


@pytest.fixture(scope="session")
def tables(tmp_path_factory):
    """All CSV inputs the figures need, generated once via the CLI."""
    root = tmp_path_factory.mktemp("tables")
    paths = {"phase": [], "dynamics": []}
    paths["spectrum"] = run_epcharge("spectrum", {
        "gamma_b": 0.5, "alpha": 0.0,
        "delta_r": {"min": -2.0, "max": 2.0, "n": 161},
    }, root / "spectrum.csv")
    for gb in GAMMAS:
        paths["phase"].append(run_epcharge("phase-diagram", {
            "gamma_b": gb,
            "delta_r": {"min": -3.0, "max": 3.0, "n": 31},
            "alpha": {"min": -gb / 2, "max": 3.0, "n": 21},
        }, root / f"phase_gb{gb}.csv"))
        paths["dynamics"].append(run_epcharge("dynamics", {
            "gamma_b": gb, "eps_r": 1.0, "t_end": 15.0, "dt": 0.1,
            "points": [{"delta_r": 0.0, "alpha": 0.0},
                       {"delta_r": 0.0, "alpha": 0.7},
                       {"delta_r": 0.0, "alpha": 1.5}],
        }, root / f"dynamics_gb{gb}.csv"))
    paths["tcrit"] = run_epcharge("tcrit", {
        "gamma_b": 0.5, "e_max": 1000.0,
        "delta_r": {"min": -1.2, "max": 1.2, "n": 49},
    }, root / "tcrit.csv")
    return paths


def diamond_offsets(ax):
    """(x, y) points of the red diamond markers on an axis."""
    pts = []
    for artist in ax.collections:
        if isinstance(artist, PathCollection):
            pts.extend(map(tuple, artist.get_offsets()))
    return pts


def test_fig2_renders_with_ep_diamonds(tables, tmp_path):
    spec = FigureSpec(inputs={"spectrum": (tables["spectrum"],)},
                      out=tmp_path / "fig2.png")
    fig = build_fig2(spec)
    for ax in fig.axes:
        xs = sorted(round(x, 9) for x, _ in diamond_offsets(ax))
        assert xs == [-1.0, 1.0]
    from epfigs.fig2 import render_fig2

    out = render_fig2(spec)
    assert out.exists() and out.stat().st_size > 0


def test_fig2_curves_coalesce_at_unit_detuning(tables, tmp_path):
    table = load_table(tables["spectrum"])
    at_one = np.isclose(table["delta_r"], 1.0)
    assert at_one.any()
    for col in ("re_lp", "re_lm", "im_lp", "im_lm"):
        assert abs(table[col][at_one][0]) < 1e-9


def test_fig3_three_dampings(tables, tmp_path):
    spec = FigureSpec(inputs={"phase": tuple(tables["phase"]),
                              "dynamics": tuple(tables["dynamics"])},
                      out=tmp_path / "fig3.png")
    fig = build_fig3(spec)
    # 3x3 panel grid plus colorbar axes
    panel_axes = [ax for ax in fig.axes if ax.get_label() != "<colorbar>"]
    assert len(panel_axes) == 9
    top = panel_axes[:3]
    for ax in top:
        xs = sorted(round(x, 9) for x, _ in diamond_offsets(ax))
        assert xs == [-1.0, 1.0]
        dashed = [ln for ln in ax.lines if ln.get_linestyle() == "--"]
        assert dashed, "transition boundary missing"
        stars = [ln for ln in ax.lines if ln.get_marker() == "*"]
        assert stars, "boundary star missing"
    # star sits on the zero-detuning boundary point: alpha = (1 - gb^2)/(2 gb)
    for ax, gb in zip(top, GAMMAS):
        star = [ln for ln in ax.lines if ln.get_marker() == "*"][0]
        assert star.get_ydata()[0] == pytest.approx(
            (1 - gb ** 2) / (2 * gb), abs=1e-6)
    from epfigs.fig3 import render_fig3

    out = render_fig3(spec)
    assert out.exists() and out.stat().st_size > 0


def test_fig3_phase_only(tables, tmp_path):
    spec = FigureSpec(inputs={"phase": (tables["phase"][0],)},
                      out=tmp_path / "fig3_single.png")
    fig = build_fig3(spec)
    panel_axes = [ax for ax in fig.axes if ax.get_label() != "<colorbar>"]
    assert len(panel_axes) == 1


def test_tcrit_stable_shading(tables, tmp_path):
    spec = FigureSpec(inputs={"tcrit": (tables["tcrit"],)},
                      out=tmp_path / "tcrit.png")
    fig = build_tcrit(spec)
    ax = fig.axes[0]
    spans = [(p.get_extents().x0, p.get_extents().x1)
             for p in ax.patches]
    spans = [(ax.transData.inverted().transform((x0, 0))[0],
              ax.transData.inverted().transform((x1, 0))[0])
             for x0, x1 in spans]
    # two green bands covering the stable wings beyond |delta_r| = 0.866
    edge = math.sqrt(1 - 0.5 ** 2)
    assert len(spans) == 2
    lows = min(spans, key=lambda s: s[0])
    highs = max(spans, key=lambda s: s[0])
    assert lows[0] == pytest.approx(-1.2, abs=1e-6)
    assert lows[1] == pytest.approx(-edge, abs=0.06)
    assert highs[0] == pytest.approx(edge, abs=0.06)
    assert highs[1] == pytest.approx(1.2, abs=1e-6)
    from epfigs.tcrit import render_tcrit

    out = render_tcrit(spec)
    assert out.exists() and out.stat().st_size > 0


def test_stable_spans_helper():
    d = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    stable = np.array([1, 0, 0, 0, 1])
    assert stable_spans(d, stable) == [(-1.0, -1.0), (1.0, 1.0)]
    assert stable_spans(d, np.ones(5)) == [(-1.0, 1.0)]
    assert stable_spans(d, np.zeros(5)) == []


def test_missing_file_reports_name(tmp_path):
    spec = FigureSpec(inputs={"spectrum": (tmp_path / "nope.csv",)},
                      out=tmp_path / "x.png")
    with pytest.raises(MissingInput, match="nope.csv"):
        build_fig2(spec)


def test_missing_column_reports_name(tables, tmp_path):
    # strip a column from a copy of the spectrum table
    src = Path(tables["spectrum"]).read_text().splitlines()
    header = src[0].split(",")
    keep = [i for i, name in enumerate(header) if name != "im_lm"]
    crippled = tmp_path / "crippled.csv"
    crippled.write_text("\n".join(
        ",".join(line.split(",")[i] for i in keep) for line in src))
    spec = FigureSpec(inputs={"spectrum": (crippled,)},
                      out=tmp_path / "x.png")
    with pytest.raises(MissingColumn, match="im_lm"):
        build_fig2(spec)


def test_cli_renders_all_figures(tables, tmp_path):
    assert figs_main(["fig2", "--in", str(tables["spectrum"]),
                      "--out", str(tmp_path / "f2.png")]) == 0
    args = ["fig3", "--in"] + [str(p) for p in tables["phase"]] \
        + [str(p) for p in tables["dynamics"]] \
        + ["--out", str(tmp_path / "f3.png")]
    assert figs_main(args) == 0
    assert figs_main(["tcrit", "--in", str(tables["tcrit"]),
                      "--out", str(tmp_path / "tc.png")]) == 0
    for name in ("f2.png", "f3.png", "tc.png"):
        assert (tmp_path / name).stat().st_size > 0


def test_cli_missing_input_exits_nonzero(tmp_path, capsys):
    code = figs_main(["fig2", "--in", str(tmp_path / "absent.csv"),
                      "--out", str(tmp_path / "x.png")])
    assert code == 1
    assert "absent.csv" in capsys.readouterr().err


def test_rerender_is_structurally_identical(tables, tmp_path):
    spec = FigureSpec(inputs={"spectrum": (tables["spectrum"],)},
                      out=tmp_path / "a.png")
    fig1 = build_fig2(spec)
    fig2 = build_fig2(spec)
    for ax1, ax2 in zip(fig1.axes, fig2.axes):
        for l1, l2 in zip(ax1.lines, ax2.lines):
            assert np.array_equal(l1.get_xdata(), l2.get_xdata())
            assert np.array_equal(l1.get_ydata(), l2.get_ydata())


def test_secondary_acceptance(tables, tmp_path):
    """Release criterion: all figures render from CLI CSVs without error,
    with EP diamonds at +/-1 and stable shading beyond |delta_r| = 0.866."""
    from epfigs import render_fig2, render_fig3, render_tcrit

    out2 = render_fig2(FigureSpec(
        inputs={"spectrum": (tables["spectrum"],)},
        out=tmp_path / "acc_fig2.png"))
    out3 = render_fig3(FigureSpec(
        inputs={"phase": tuple(tables["phase"]),
                "dynamics": tuple(tables["dynamics"])},
        out=tmp_path / "acc_fig3.png"))
    outc = render_tcrit(FigureSpec(
        inputs={"tcrit": (tables["tcrit"],)},
        out=tmp_path / "acc_tcrit.png"))
    ok = all(p.exists() and p.stat().st_size > 0 for p in (out2, out3, outc))
    print(f"[{'PASS' if ok else 'FAIL'}] Figure regeneration: fig2/fig3/"
          f"critical-time rendered from CLI CSVs for gamma_b in {GAMMAS}")
    assert ok
