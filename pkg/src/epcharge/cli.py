"""Command-line interface.

Every computation is exposed as a subcommand taking a JSON config file and
writing CSV (or JSON) plus a small metadata sidecar.  Exit codes: 0 ok,
2 config error, 3 domain error, 4 tolerance violation (validate).  All
floating-point output is printed with 17 significant digits so reruns of
the same config are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import EpchargeError
from .integrator import QuenchSchedule, integrate_full, integrate_quench, \
    integrate_reduced
from .model import PhysicalParams, ReducedParams, reduce as reduce_params, \
    reduction_diagnostics, separation_ratio
from .propagator import amplitudes
from .sweep import dynamics_panel, eigenvalue_profile, phase_diagram, \
    tcrit_curve


class ConfigError(Exception):
    """Malformed or incomplete configuration (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Parsed run configuration: command-specific params plus output routing."""

    command: str
    params: dict
    out: str | None = None
    format: str = "csv"

    @classmethod
    def from_dict(cls, command: str, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        data = dict(raw)
        out = data.pop("out", None)
        fmt = data.pop("format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {fmt!r}")
        return cls(command=command, params=data, out=out, format=fmt)

    def to_dict(self) -> dict:
        data = dict(self.params)
        if self.out is not None:
            data["out"] = self.out
        data["format"] = self.format
        return data


def _need(params: dict, key: str, kind=float):
    if key not in params:
        raise ConfigError(f"missing required config key {key!r}")
    try:
        return kind(params[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from exc


def _axis(params: dict, key: str, default: tuple | None = None):
    """Parse an axis spec {min, max, n} into a linspace array."""
    if key not in params:
        if default is None:
            raise ConfigError(f"missing required config key {key!r}")
        lo, hi, n = default
    else:
        spec = params[key]
        if not isinstance(spec, dict):
            raise ConfigError(f"config key {key!r} must be an object")
        try:
            lo = float(spec["min"])
            hi = float(spec["max"])
            n = int(spec["n"])
        except KeyError as exc:
            raise ConfigError(f"axis {key!r} needs min/max/n") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"axis {key!r}: {exc}") from exc
    if n < 1:
        raise ValueError(f"axis {key!r} is empty (n = {n})")
    if hi < lo:
        raise ValueError(f"axis {key!r} has max < min")
    return np.linspace(lo, hi, n)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_table(out: str, fmt: str, columns: list[str], rows) -> Path:
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow(_fmt(v) for v in row)
    else:
        payload = {"columns": columns,
                   "rows": [[_fmt(v) for v in row] for row in rows]}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
    return path


def _write_sidecar(out: str, meta: dict) -> Path:
    path = Path(out)
    side = path.with_name(path.stem + ".meta.json")
    with open(side, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return side


def _resolve_out(cfg: RunConfig) -> str:
    if cfg.out is None:
        raise ConfigError("no output path: pass --out or set \"out\" in the config")
    return cfg.out


def cmd_spectrum(cfg: RunConfig, threads: int = 1) -> int:
    gamma_b = _need(cfg.params, "gamma_b")
    alpha = float(cfg.params.get("alpha", 0.0))
    axis = _axis(cfg.params, "delta_r")
    prof = eigenvalue_profile(gamma_b, alpha, axis)
    columns = ["delta_r", "re_lp", "im_lp", "re_lm", "im_lm"]
    rows = zip(prof["delta_r"], prof["re_lp"], prof["im_lp"],
               prof["re_lm"], prof["im_lm"])
    out = _resolve_out(cfg)
    _write_table(out, cfg.format, columns, rows)
    _write_sidecar(out, {
        "command": "spectrum",
        "config": cfg.to_dict(),
        "columns": columns,
        "displacement": "eigenvalues shifted by i*gamma_b",
        "version": __version__,
    })
    return 0


def cmd_dynamics(cfg: RunConfig, threads: int = 1) -> int:
    mode = cfg.params.get("mode", "panel")
    out = _resolve_out(cfg)
    if mode == "panel":
        return _dynamics_panel(cfg, out, threads)
    if mode == "quench":
        return _dynamics_quench(cfg, out)
    raise ConfigError(f"dynamics mode must be panel or quench, got {mode!r}")


def _dynamics_panel(cfg: RunConfig, out: str, threads: int) -> int:
    gamma_b = _need(cfg.params, "gamma_b")
    eps_r = float(cfg.params.get("eps_r", 1.0))
    t_end = float(cfg.params.get("t_end", 20.0))
    dt = float(cfg.params.get("dt", 0.02))
    source = cfg.params.get("source", "closed_form")
    if source not in ("closed_form", "rk4"):
        raise ConfigError("source must be closed_form or rk4")
    raw_points = cfg.params.get("points")
    if not isinstance(raw_points, list) or not raw_points:
        raise ConfigError("dynamics panel needs a non-empty \"points\" list")
    points = []
    for item in raw_points:
        try:
            points.append((float(item["delta_r"]), float(item["alpha"])))
        except (TypeError, KeyError, ValueError) as exc:
            raise ConfigError(f"bad point entry {item!r}: {exc}") from exc

    if source == "closed_form":
        trajs = dynamics_panel(gamma_b, points, t_end=t_end, dt=dt,
                               eps_r=eps_r)
    else:
        def one(pt):
            delta_r, alpha = pt
            r = ReducedParams(gamma_a=gamma_b + 2 * alpha, gamma_b=gamma_b,
                              delta_r=delta_r, eps_r=eps_r)
            return integrate_reduced(r, t_end, dt)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                trajs = list(pool.map(one, points))
        else:
            trajs = [one(pt) for pt in points]
        from .spectral import classify, eigensystem
        for traj, (delta_r, alpha) in zip(trajs, points):
            r = ReducedParams(gamma_a=gamma_b + 2 * alpha, gamma_b=gamma_b,
                              delta_r=delta_r, eps_r=eps_r)
            traj.meta["point"] = {"delta_r": delta_r, "alpha": alpha}
            traj.meta["regime"] = classify(eigensystem(r)).tag.value

    columns = ["point", "delta_r", "alpha", "regime", "t",
               "re_a", "im_a", "re_b", "im_b", "energy", "power",
               "power_norm"]
    norm = eps_r ** 2 if eps_r else math.nan
    rows = []
    for k, traj in enumerate(trajs):
        delta_r, alpha = points[k]
        regime = traj.meta.get("regime", "unknown")
        for i, t in enumerate(traj.times):
            rows.append((k, delta_r, alpha, regime, t,
                         traj.amps[i, 0].real, traj.amps[i, 0].imag,
                         traj.amps[i, 1].real, traj.amps[i, 1].imag,
                         traj.energies[i], traj.powers[i],
                         traj.powers[i] / norm))
    _write_table(out, cfg.format, columns, rows)
    _write_sidecar(out, {
        "command": "dynamics",
        "config": cfg.to_dict(),
        "columns": columns,
        "points": [
            {"index": k, "delta_r": d, "alpha": a,
             "regime": trajs[k].meta.get("regime", "unknown")}
            for k, (d, a) in enumerate(points)
        ],
        "version": __version__,
    })
    return 0


def _dynamics_quench(cfg: RunConfig, out: str) -> int:
    raw_segments = cfg.params.get("segments")
    if not isinstance(raw_segments, list) or not raw_segments:
        raise ConfigError("quench mode needs a non-empty \"segments\" list")
    dt = float(cfg.params.get("dt", 0.01))
    segments = []
    for item in raw_segments:
        try:
            params = ReducedParams(
                gamma_a=float(item["gamma_a"]),
                gamma_b=float(item["gamma_b"]),
                delta_r=float(item["delta_r"]),
                eps_r=float(item.get("eps_r", 1.0)),
            )
            segments.append((float(item["duration"]), params))
        except (TypeError, KeyError) as exc:
            raise ConfigError(f"bad segment entry {item!r}: {exc}") from exc
    traj = integrate_quench(QuenchSchedule(segments=tuple(segments)), dt=dt)
    bounds = traj.meta.get("segment_boundaries", [])
    seg_of = np.zeros(len(traj.times), dtype=int)
    for b in bounds:
        seg_of[b:] += 1
    columns = ["segment", "t", "re_a", "im_a", "re_b", "im_b",
               "energy", "power"]
    rows = [
        (int(seg_of[i]), t,
         traj.amps[i, 0].real, traj.amps[i, 0].imag,
         traj.amps[i, 1].real, traj.amps[i, 1].imag,
         traj.energies[i], traj.powers[i])
        for i, t in enumerate(traj.times)
    ]
    _write_table(out, cfg.format, columns, rows)
    meta = {
        "command": "dynamics",
        "config": cfg.to_dict(),
        "columns": columns,
        "segments": traj.meta["segments"],
        "segment_boundaries": bounds,
        "final_regime": traj.meta.get("final_regime"),
        "version": __version__,
    }
    if "overshoot_factor" in traj.meta:
        meta["overshoot_factor"] = traj.meta["overshoot_factor"]
    _write_sidecar(out, meta)
    return 0


def cmd_phase_diagram(cfg: RunConfig, threads: int = 1) -> int:
    gamma_b = _need(cfg.params, "gamma_b")
    d_axis = _axis(cfg.params, "delta_r", default=(-3.0, 3.0, 201))
    a_default = (-0.5 * gamma_b, 3.0, 201)
    a_axis = _axis(cfg.params, "alpha", default=a_default)
    grid = phase_diagram(
        gamma_b,
        delta_r_range=(float(d_axis[0]), float(d_axis[-1])),
        alpha_range=(float(a_axis[0]), float(a_axis[-1])),
        shape=(len(d_axis), len(a_axis)),
    )
    columns = ["delta_r", "alpha", "growth", "regime"]
    rows = []
    for i, alpha in enumerate(grid.alpha_axis):
        for j, delta_r in enumerate(grid.delta_r_axis):
            rows.append((delta_r, alpha, grid.growth[i, j],
                         grid.regime[i, j].value))
    out = _resolve_out(cfg)
    _write_table(out, cfg.format, columns, rows)
    _write_sidecar(out, {
        "command": "phase-diagram",
        "config": cfg.to_dict(),
        "columns": columns,
        "gamma_b": gamma_b,
        "boundary": [[float(d), float(a)] for d, a in grid.boundary],
        "ep_points": [[float(d), float(a)] for d, a in grid.ep_points],
        "version": __version__,
    })
    return 0


def cmd_tcrit(cfg: RunConfig, threads: int = 1) -> int:
    gamma_b = _need(cfg.params, "gamma_b")
    e_max = _need(cfg.params, "e_max")
    eps_r = float(cfg.params.get("eps_r", 1.0))
    axis = _axis(cfg.params, "delta_r", default=(-1.2, 1.2, 241))
    curve = tcrit_curve(gamma_b, e_max,
                        delta_r_range=(float(axis[0]), float(axis[-1])),
                        n=len(axis), eps_r=eps_r)
    columns = ["delta_r", "t_asym", "t_exact", "e_scale", "stable"]
    rows = zip(curve.delta_r_axis, curve.t_asymptotic, curve.t_exact,
               curve.e_scale, curve.stable_mask)
    out = _resolve_out(cfg)
    _write_table(out, cfg.format, columns, rows)
    _write_sidecar(out, {
        "command": "tcrit",
        "config": cfg.to_dict(),
        "columns": columns,
        "gamma_b": gamma_b,
        "e_max": e_max,
        "stable_edge": math.sqrt(max(0.0, 1.0 - gamma_b ** 2)),
        "version": __version__,
    })
    return 0


def _validate_physical(ratio: float, kappa_c: float, gamma_big: float,
                       delta_r: float, eps_r: float) -> PhysicalParams:
    """Three-mode parameter set with a prescribed fast/slow separation.

    Shared-channel weights p_a = p_b shrink with the requested ratio while
    the auxiliary relaxation stays fixed, so the reduced model
    (gamma_a = gamma_b = 1 + kappa_c/Gamma, delta_r, eps_r) is ratio
    independent and only the elimination error varies.
    """
    dfast = kappa_c + 2.0 * gamma_big
    p = math.sqrt(dfast / (gamma_big * ratio))
    gamma_eff = p * p * gamma_big ** 2 / dfast
    delta = delta_r * gamma_eff
    return PhysicalParams(
        delta_a=delta, delta_b=-delta,
        kappa_a=0.0, kappa_b=0.0, kappa_c=kappa_c,
        Gamma=gamma_big,
        p_a=p, p_b=p, p_c_a=1.0, p_c_b=1.0,
        drive_eps=eps_r * gamma_eff,
    )


def cmd_validate(cfg: RunConfig, threads: int = 1) -> int:
    params = cfg.params
    ratios = params.get("ratios", [10.0, 30.0, 100.0])
    if not isinstance(ratios, list) or not ratios:
        raise ConfigError("validate needs a non-empty \"ratios\" list")
    ratios = [float(x) for x in ratios]
    t_rescaled = float(params.get("t_rescaled", 5.0))
    dt = float(params.get("dt", 0.05))
    kappa_c = float(params.get("kappa_c", 0.2))
    gamma_big = float(params.get("Gamma", 1.0))
    delta_r = float(params.get("delta_r", 0.4))
    eps_r = float(params.get("eps_r", 1.0))
    max_error = float(params.get("max_error", 0.05))
    require_decreasing = bool(params.get("require_decreasing", True))
    if t_rescaled <= 0:
        raise ValueError("t_rescaled must be > 0")

    rows = []
    errors = []
    for ratio in ratios:
        phys = _validate_physical(ratio, kappa_c, gamma_big, delta_r, eps_r)
        red = reduce_params(phys)
        diag = reduction_diagnostics(phys)
        t_phys = t_rescaled / red.gamma_eff
        traj = integrate_full(phys, t_phys, dt)
        b_full = traj.amps[-1, 1] * np.exp(1j * diag.gauge_phase)
        dimless = ReducedParams(gamma_a=red.gamma_a, gamma_b=red.gamma_b,
                                delta_r=red.delta_r, eps_r=red.eps_r)
        _, b_closed = amplitudes(dimless, t_rescaled)
        rel = abs(b_full - b_closed) / max(abs(b_closed), 1e-300)
        rows.append((ratio, separation_ratio(phys), red.gamma_a,
                     red.delta_r, rel))
        errors.append(rel)

    columns = ["ratio", "separation_ratio", "gamma_reduced", "delta_r",
               "rel_error_b"]
    out = _resolve_out(cfg)
    _write_table(out, cfg.format, columns, rows)
    violations = []
    if errors[-1] > max_error:
        violations.append(
            f"error {errors[-1]:.3g} at ratio {ratios[-1]:g} exceeds "
            f"{max_error:g}")
    if require_decreasing and any(e2 >= e1 for e1, e2
                                  in zip(errors, errors[1:])):
        violations.append("errors do not decrease with the ratio")
    _write_sidecar(out, {
        "command": "validate",
        "config": cfg.to_dict(),
        "columns": columns,
        "violations": violations,
        "version": __version__,
    })
    if violations:
        for v in violations:
            print(f"epcharge: error: tolerance: {v}", file=sys.stderr)
        return 4
    return 0


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "dynamics": cmd_dynamics,
    "phase-diagram": cmd_phase_diagram,
    "tcrit": cmd_tcrit,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="epcharge",
        description="Charger-battery dynamics with engineered exceptional "
                    "points: spectra, phase diagrams, trajectories and "
                    "safe-operation times.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", help="output path (overrides config)")
        p.add_argument("--format", choices=("csv", "json"),
                       help="output format (overrides config)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for per-point sweeps")
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"epcharge: error: config-parse: {exc}", file=sys.stderr)
        return 2

    try:
        cfg = RunConfig.from_dict(args.command, raw)
        if args.out:
            cfg = RunConfig(cfg.command, cfg.params, args.out, cfg.format)
        if args.format:
            cfg = RunConfig(cfg.command, cfg.params, cfg.out, args.format)
        return _COMMANDS[args.command](cfg, threads=args.threads)
    except ConfigError as exc:
        print(f"epcharge: error: config: {exc}", file=sys.stderr)
        return 2
    except (EpchargeError, ValueError) as exc:
        print(f"epcharge: error: domain: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
