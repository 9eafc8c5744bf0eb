"""Independent numerical integration of the first-moment equations.

This module is the oracle for every closed form in the package: classic
fixed-step RK4 with step halving until two successive refinements agree,
applied to the full three-mode system (physical time) and to the reduced
two-mode system (rescaled time).  Fixed steps plus Richardson-style
refinement keep test baselines bit-reproducible, which matters more here
than raw speed; the stepping loops live in :mod:`epcharge._kernels` with a
compiled backend when available.

``integrate_quench`` realizes the safety protocol: piecewise-constant
reduced parameters with amplitude-continuous instantaneous switches.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .errors import StepUnderflow
from .model import PhysicalParams, ReducedParams
from .spectral import classify, eigensystem

#: refinement target: successive-refinement error per unit time
REFINE_TOL = 1e-8
#: smallest step before giving up on refinement
MIN_STEP = 1e-12


@dataclass(frozen=True)
class Trajectory:
    """Sampled trajectory of the mode amplitudes.

    ``amps`` has one row per time and one column per mode, (a, b) or
    (a, b, c); ``energies`` is |b|^2 and ``powers`` its time derivative from
    the equations of motion.  ``meta`` records the parameters and integrator
    settings that produced the data.
    """

    times: np.ndarray
    amps: np.ndarray
    energies: np.ndarray
    powers: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def write_csv(self, path) -> None:
        """Serialize as CSV: t, re/im of each mode, energy, power."""
        import csv

        three = self.amps.shape[1] == 3
        header = ["t", "re_a", "im_a", "re_b", "im_b"]
        if three:
            header += ["re_c", "im_c"]
        header += ["energy", "power"]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for i, t in enumerate(self.times):
                row = [t, self.amps[i, 0].real, self.amps[i, 0].imag,
                       self.amps[i, 1].real, self.amps[i, 1].imag]
                if three:
                    row += [self.amps[i, 2].real, self.amps[i, 2].imag]
                row += [self.energies[i], self.powers[i]]
                writer.writerow(f"{v:.17g}" for v in row)


@dataclass(frozen=True)
class QuenchSchedule:
    """Ordered piecewise-constant parameter segments (duration, params)."""

    segments: tuple[tuple[float, ReducedParams], ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        for duration, params in self.segments:
            if not duration > 0:
                raise ValueError("segment durations must be > 0")
            if not isinstance(params, ReducedParams):
                raise TypeError("segment params must be ReducedParams")


def _refined_run(run, n_base: int, t_end: float, dt: float, tol: float,
                 auto_refine: bool):
    """Halve the step until two refinements agree to tol per unit time."""
    if t_end / n_base < MIN_STEP:
        raise StepUnderflow(f"requested step is below the minimum {MIN_STEP:g}")
    factor = 1
    prev = run(factor)
    refinements = 0
    err = math.nan
    if auto_refine:
        while True:
            factor *= 2
            if t_end / (n_base * factor) < MIN_STEP:
                raise StepUnderflow(
                    f"step fell below {MIN_STEP:g} before reaching "
                    f"tolerance {tol:g} per unit time")
            cur = run(factor)
            err = max(
                float(np.max(np.abs(p - c) / (1.0 + np.abs(c))))
                for p, c in zip(prev, cur)
            )
            prev = cur
            refinements += 1
            if err <= tol * t_end:
                break
    return prev, t_end / (n_base * factor), refinements, err


def integrate_reduced(r: ReducedParams, t_end: float, dt: float,
                      init: tuple[complex, complex] = (0j, 0j),
                      tol: float = REFINE_TOL,
                      auto_refine: bool = True) -> Trajectory:
    """RK4 trajectory of the reduced two-mode system in rescaled time."""
    if not t_end > 0 or not dt > 0:
        raise ValueError("t_end and dt must be > 0")
    caa = -1j * r.delta_r - r.gamma_a
    cbb = 1j * r.delta_r - r.gamma_b
    n_base = max(1, math.ceil(t_end / dt))

    def run(factor: int):
        h = t_end / (n_base * factor)
        return _kernels.rk4_reduced(caa, cbb, complex(r.eps_r),
                                    complex(init[0]), complex(init[1]),
                                    h, n_base * factor, factor)

    (a, b), h_final, refinements, err = _refined_run(
        run, n_base, t_end, dt, tol, auto_refine)
    times = np.linspace(0.0, t_end, n_base + 1)
    amps = np.column_stack([a, b])
    powers = 2.0 * np.real(np.conj(b) * (a + cbb * b))
    meta = {
        "model": "reduced",
        "params": asdict(r),
        "init": [complex(init[0]), complex(init[1])],
        "dt_requested": dt,
        "dt_final": h_final,
        "refinements": refinements,
        "refine_error": err,
        "tol": tol,
        "backend": _kernels.BACKEND,
    }
    return Trajectory(times=times, amps=amps,
                      energies=np.abs(b) ** 2, powers=powers, meta=meta)


def integrate_full(p: PhysicalParams, t_end: float, dt: float,
                   init: tuple[complex, complex, complex] = (0j, 0j, 0j),
                   tol: float = REFINE_TOL,
                   auto_refine: bool = True) -> Trajectory:
    """RK4 trajectory of the full three-mode system in physical time.

    The auxiliary mode makes this stiff when its relaxation dominates; if
    refinement pushes the step below the minimum, StepUnderflow signals
    that the reduced model should be used instead.
    """
    if not t_end > 0 or not dt > 0:
        raise ValueError("t_end and dt must be > 0")
    mu_ca, mu_cb = p.mu_ca(), p.mu_cb()
    caa = -1j * p.delta_a - (p.kappa_a + p.big_gamma_a())
    cbb = -1j * p.delta_b - (p.kappa_b + p.big_gamma_b())
    ccc = complex(-(p.kappa_c + p.big_gamma_c_a() + p.big_gamma_c_b()))
    cac = -p.Gamma * mu_ca
    cbc = -p.Gamma * mu_cb
    cca = -p.Gamma * mu_ca.conjugate()
    ccb = -p.Gamma * mu_cb.conjugate()
    n_base = max(1, math.ceil(t_end / dt))

    def run(factor: int):
        h = t_end / (n_base * factor)
        return _kernels.rk4_full(caa, cac, cbb, cbc, cca, ccb, ccc,
                                 complex(p.drive_eps),
                                 complex(init[0]), complex(init[1]),
                                 complex(init[2]),
                                 h, n_base * factor, factor)

    (a, b, c), h_final, refinements, err = _refined_run(
        run, n_base, t_end, dt, tol, auto_refine)
    times = np.linspace(0.0, t_end, n_base + 1)
    amps = np.column_stack([a, b, c])
    powers = 2.0 * np.real(np.conj(b) * (cbb * b + cbc * c))
    meta = {
        "model": "full",
        "params": asdict(p),
        "init": [complex(v) for v in init],
        "dt_requested": dt,
        "dt_final": h_final,
        "refinements": refinements,
        "refine_error": err,
        "tol": tol,
        "backend": _kernels.BACKEND,
    }
    return Trajectory(times=times, amps=amps,
                      energies=np.abs(b) ** 2, powers=powers, meta=meta)


def integrate_quench(schedule: QuenchSchedule,
                     init: tuple[complex, complex] = (0j, 0j),
                     dt: float = 0.01,
                     tol: float = REFINE_TOL,
                     auto_refine: bool = True) -> Trajectory:
    """Integrate through a piecewise-constant parameter schedule.

    Switches are instantaneous and amplitude-continuous: each segment starts
    from the previous segment's final state.  The switch instant itself is
    reported once, with the post-switch parameters (its power therefore
    jumps).  When the final segment is non-growing, the realized post-switch
    overshoot above max(energy at switch, final steady state) is reported in
    ``meta['overshoot_factor']``.
    """
    pieces = []
    state = (complex(init[0]), complex(init[1]))
    offset = 0.0
    boundaries = [0]
    for duration, params in schedule.segments:
        traj = integrate_reduced(params, duration, dt, init=state,
                                 tol=tol, auto_refine=auto_refine)
        state = (complex(traj.amps[-1, 0]), complex(traj.amps[-1, 1]))
        pieces.append((offset + traj.times, traj.amps, traj.powers))
        offset += duration
        boundaries.append(boundaries[-1] + len(traj.times) - 1)

    times = np.concatenate(
        [t[:-1] if i < len(pieces) - 1 else t for i, (t, _, _) in enumerate(pieces)])
    amps = np.concatenate(
        [a[:-1] if i < len(pieces) - 1 else a for i, (_, a, _) in enumerate(pieces)])
    powers = np.concatenate(
        [p[:-1] if i < len(pieces) - 1 else p for i, (_, _, p) in enumerate(pieces)])
    energies = np.abs(amps[:, 1]) ** 2

    final_params = schedule.segments[-1][1]
    regime = classify(eigensystem(final_params))
    meta = {
        "model": "quench",
        "segments": [
            {"duration": d, "params": asdict(pr)} for d, pr in schedule.segments
        ],
        "segment_boundaries": boundaries[1:-1],
        "final_regime": regime.tag.value,
        "dt_requested": dt,
        "backend": _kernels.BACKEND,
    }
    if regime.growth_rate <= 0 and len(schedule.segments) > 1:
        i_switch = boundaries[-2]
        e_switch = float(energies[i_switch])
        spec = eigensystem(final_params)
        e_ss = (final_params.eps_r / abs(spec.pi_lambda)) ** 2 \
            if abs(spec.pi_lambda) > 0 else math.inf
        envelope = max(e_switch, e_ss)
        tail = float(np.max(energies[i_switch:]))
        meta["overshoot_factor"] = max(0.0, tail / envelope - 1.0) \
            if envelope > 0 else 0.0
    return Trajectory(times=times, amps=amps, energies=energies,
                      powers=powers, meta=meta)
