"""Parameter sweeps: phase diagrams, eigenvalue profiles, dynamics panels
and critical-time curves.

All sweeps are deterministic: grid cells are independent and evaluated in
index order, so identical inputs give identical arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoThreshold
from .integrator import Trajectory
from .model import ReducedParams
from .propagator import battery_power, energy_symmetric, trajectory_closed_form
from .spectral import (BOUNDARY_TOL, EP_TOL, Regime, boundary_alpha, classify,
                       dominant_growth, eigensystem)


@dataclass(frozen=True)
class PhaseGrid:
    """Growth rate and regime label over a (delta_r, alpha) grid.

    ``growth[i, j]`` corresponds to ``alpha_axis[i]``, ``delta_r_axis[j]``.
    ``boundary`` is the polyline of zero-growth points (delta_r, alpha*),
    one per detuning column where a crossing exists inside the window;
    ``ep_points`` lists the coalescence coordinates inside the window.
    """

    delta_r_axis: np.ndarray
    alpha_axis: np.ndarray
    growth: np.ndarray
    regime: np.ndarray
    boundary: np.ndarray
    ep_points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class CritTimeCurve:
    """Safe-operation times versus detuning at balanced damping.

    ``t_asymptotic`` comes from the exponential-envelope formula,
    ``t_exact`` from bisection on the explicit energy; both are NaN where
    the point is stable (no growing mode, no threshold crossing to find).
    ``e_scale`` is the envelope prefactor in units of eps_r^2 (NaN for
    |delta_r| >= 1 where the envelope is not defined).
    """

    delta_r_axis: np.ndarray
    t_asymptotic: np.ndarray
    t_exact: np.ndarray
    e_scale: np.ndarray
    stable_mask: np.ndarray


def phase_diagram(gamma_b: float,
                  delta_r_range: tuple[float, float] = (-3.0, 3.0),
                  alpha_range: tuple[float, float] | None = None,
                  shape: tuple[int, int] = (201, 201),
                  tol: float = BOUNDARY_TOL,
                  ep_tol: float = EP_TOL) -> PhaseGrid:
    """Sweep the growth rate over (delta_r, alpha) and trace the boundary.

    ``shape`` is (n_delta, n_alpha).  The alpha window must stay within
    [-gamma_b/2, inf) so the charger damping remains nonnegative.
    """
    if not gamma_b > 0:
        raise ValueError("gamma_b must be > 0")
    a_lo_edge = -0.5 * gamma_b
    if alpha_range is None:
        alpha_range = (a_lo_edge, 3.0)
    if alpha_range[0] < a_lo_edge - 1e-12:
        raise ValueError(
            f"alpha range must start at or above -gamma_b/2 = {a_lo_edge}")
    n_delta, n_alpha = shape
    if n_delta < 2 or n_alpha < 2:
        raise ValueError("grid needs at least 2 points per axis")
    delta_axis = np.linspace(delta_r_range[0], delta_r_range[1], n_delta)
    alpha_axis = np.linspace(alpha_range[0], alpha_range[1], n_alpha)
    dd, aa = np.meshgrid(delta_axis, alpha_axis)
    growth = dominant_growth(gamma_b, aa, dd)
    omega_abs = np.abs(np.sqrt(1.0 + (aa + 1j * dd) ** 2))

    regime = np.empty(growth.shape, dtype=object)
    regime[...] = Regime.UNBROKEN
    regime[growth > tol] = Regime.BROKEN
    regime[np.abs(growth) <= tol] = Regime.BOUNDARY
    regime[omega_abs < ep_tol] = Regime.EXCEPTIONAL_POINT

    boundary_pts = []
    for d in delta_axis:
        astar = boundary_alpha(gamma_b, float(d), alpha_max=alpha_axis[-1])
        if astar is not None:
            boundary_pts.append((float(d), float(astar)))
    boundary = np.array(boundary_pts) if boundary_pts else np.empty((0, 2))

    eps = []
    if alpha_axis[0] <= 0.0 <= alpha_axis[-1]:
        for d in (-1.0, 1.0):
            if delta_axis[0] <= d <= delta_axis[-1]:
                eps.append((d, 0.0))
    return PhaseGrid(delta_r_axis=delta_axis, alpha_axis=alpha_axis,
                     growth=growth, regime=regime, boundary=boundary,
                     ep_points=tuple(eps))


def eigenvalue_profile(gamma_b: float, alpha: float,
                       delta_r_values: np.ndarray) -> dict[str, np.ndarray]:
    """Displaced eigenvalues lambda_pm + i*gamma_b along a detuning scan.

    The displacement removes the battery-damping offset so the coalescence
    structure sits at zero: for balanced damping the imaginary parts split
    for |delta_r| < 1, the real parts for |delta_r| > 1, and both branches
    meet at delta_r = +/-1.
    """
    delta = np.asarray(delta_r_values, dtype=float)
    s = np.sqrt(1.0 + (alpha + 1j * delta) ** 2)
    lam_bar_displaced = -1j * alpha          # lambda_bar + i gamma_b
    lp = lam_bar_displaced + 1j * s
    lm = lam_bar_displaced - 1j * s
    return {
        "delta_r": delta,
        "re_lp": lp.real, "im_lp": lp.imag,
        "re_lm": lm.real, "im_lm": lm.imag,
    }


def dynamics_panel(gamma_b: float,
                   points: list[tuple[float, float]],
                   t_end: float = 20.0,
                   dt: float = 0.02,
                   eps_r: float = 1.0) -> list[Trajectory]:
    """Closed-form energy/power time series at selected (delta_r, alpha) points."""
    if not t_end > 0 or not dt > 0:
        raise ValueError("t_end and dt must be > 0")
    times = np.linspace(0.0, t_end, max(1, round(t_end / dt)) + 1)
    out = []
    for delta_r, alpha in points:
        gamma_a = gamma_b + 2.0 * alpha
        if gamma_a < 0:
            raise ValueError(
                f"point (delta_r={delta_r}, alpha={alpha}) leaves the "
                f"physical domain alpha >= -gamma_b/2")
        r = ReducedParams(gamma_a=gamma_a, gamma_b=gamma_b,
                          delta_r=delta_r, eps_r=eps_r)
        a, b = trajectory_closed_form(r, times)
        powers = battery_power(r, a, b)
        regime = classify(eigensystem(r))
        meta = {
            "source": "closed_form",
            "point": {"delta_r": delta_r, "alpha": alpha},
            "params": {"gamma_a": gamma_a, "gamma_b": gamma_b,
                       "delta_r": delta_r, "eps_r": eps_r},
            "regime": regime.tag.value,
            "growth_rate": regime.growth_rate,
        }
        out.append(Trajectory(times=times, amps=np.column_stack([a, b]),
                              energies=np.abs(b) ** 2, powers=powers,
                              meta=meta))
    return out


def tcrit_curve(gamma_b: float, e_max: float,
                delta_r_range: tuple[float, float] = (-1.2, 1.2),
                n: int = 241,
                eps_r: float = 1.0,
                t_guard: float = 1e4) -> CritTimeCurve:
    """Critical charging times over a detuning scan at balanced damping.

    ``e_max`` is the device threshold in units of eps_r^2.  On stable points
    (no growing mode: |delta_r| >= sqrt(1 - gamma_b^2), or gamma_b >= 1)
    both times are NaN.  Near the phase boundary the envelope prefactor
    diverges; where it already exceeds the threshold the exact time is
    reported as 0 rather than a negative logarithm.
    """
    if not e_max > 0:
        raise ValueError("e_max must be > 0")
    if not gamma_b > 0:
        raise ValueError("gamma_b must be > 0")
    if n < 1:
        raise ValueError("need at least one scan point")
    gamma = gamma_b  # balanced damping: alpha = 0
    axis = np.linspace(delta_r_range[0], delta_r_range[1], n)
    t_asym = np.full(n, np.nan)
    t_exact = np.full(n, np.nan)
    e_scale = np.full(n, np.nan)
    stable = np.empty(n, dtype=bool)
    threshold = e_max * eps_r ** 2

    for i, d in enumerate(axis):
        w2 = 1.0 - d * d
        if w2 > 0:
            w = math.sqrt(w2)
            kay = d * d + gamma * gamma - 1.0
            e_scale[i] = (1.0 / (4.0 * kay * kay)) * ((gamma + w) / w) ** 2
        else:
            w = 0.0
        stable[i] = w <= gamma
        if stable[i]:
            continue
        gain = 2.0 * (w - gamma)
        scale_abs = e_scale[i] * eps_r ** 2
        t_asym[i] = max(0.0, math.log(threshold / scale_abs) / gain)
        if scale_abs >= threshold:
            t_exact[i] = 0.0
        else:
            r = ReducedParams(gamma_a=gamma, gamma_b=gamma,
                              delta_r=float(d), eps_r=eps_r)
            t_exact[i] = _first_crossing(
                lambda t: energy_symmetric(r, t), threshold,
                t_start=1.0 / w, t_guard=t_guard)
    return CritTimeCurve(delta_r_axis=axis, t_asymptotic=t_asym,
                         t_exact=t_exact, e_scale=e_scale, stable_mask=stable)


def _first_crossing(fn, target: float, t_start: float,
                    t_guard: float = 1e4, xtol: float = 1e-10) -> float:
    """First time fn(t) reaches target: bracket by doubling, then bisect."""
    t_lo, t_hi = 0.0, t_start
    while fn(t_hi) < target:
        t_lo, t_hi = t_hi, 2.0 * t_hi
        if t_hi > t_guard:
            raise NoThreshold(
                f"energy did not reach {target:g} before t = {t_guard:g}")
    while t_hi - t_lo > xtol * max(1.0, t_hi):
        mid = 0.5 * (t_lo + t_hi)
        if fn(mid) < target:
            t_lo = mid
        else:
            t_hi = mid
    return 0.5 * (t_lo + t_hi)


def fit_log_slope(times: np.ndarray, values: np.ndarray,
                  window_frac: float = 0.5,
                  floor: float = 1e-12) -> float:
    """Least-squares slope of log(values) over the trailing time window.

    Points at or below ``floor`` are discarded so underflowed samples do not
    poison the fit.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    t0 = times[-1] - window_frac * (times[-1] - times[0])
    mask = (times >= t0) & (values > floor)
    if np.count_nonzero(mask) < 2:
        raise ValueError("not enough usable points for a slope fit")
    coeffs = np.polyfit(times[mask], np.log(values[mask]), 1)
    return float(coeffs[0])
