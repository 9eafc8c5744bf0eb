"""Closed-form propagator and battery energy in all spectral regimes.

Everything here works in rescaled (dimensionless) time.  The matrix
exponential of the drift matrix is evaluated through the two-point Sylvester
form when the eigenvalues are distinct and through the defective
(polynomial-in-time) form at coalescence.  The hazardous piece is the
divided difference

    (exp(-i lambda_+ t) - exp(-i lambda_- t)) / (lambda_+ - lambda_-),

which loses roughly |Omega t|^-1 digits to cancellation near a coalescence;
inside the band |Omega t| < SERIES_TOL it is therefore evaluated by its
power series (terms through (Omega t)^4, truncation below 1e-20 in the
band), which reduces exactly to the defective form at Omega = 0.

The driven response with the modes starting empty is

    b(t) = eps_r * (exp(-i lb t) [cos(Om t) + i lb t sinc(Om t)] - 1) / Pi,

with lb = (lambda_+ + lambda_-)/2, Om the half-splitting and
Pi = lambda_+ lambda_- the eigenvalue product; the battery energy is |b|^2.
A zero eigenvalue (Pi = 0, a marginally stable mode) makes this
indeterminate, in which case the forcing integrals fall back to direct
quadrature and a SingularProduct warning flags the record.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (AsymmetricParams, DegenerateSpectrum, NotAtEP, NotBroken,
                     SingularProduct)
from .model import ReducedParams
from .spectral import ep_conditions

#: below this |Omega| the spectrum is treated as coalesced
EP_SWITCH = 1e-7
#: |Omega * t| band inside which divided differences use the series
SERIES_TOL = 1e-4
#: |Pi| threshold for the quadrature fallback of the forcing integrals
PI_TOL = 1e-6


@dataclass(frozen=True)
class Propagator2:
    """Entries of the 2x2 time-evolution matrix exp(-i H t)."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21


@dataclass(frozen=True)
class EnergyRecord:
    """Mode amplitudes with stored energy and its rate of change at one time."""

    t: float
    a: complex
    b: complex
    energy: float
    power: float


def _structure(r: ReducedParams) -> tuple[float, complex, complex, complex]:
    """(alpha, lambda_bar, omega, q) with q the diagonal part delta_r - i*alpha."""
    alpha = r.alpha()
    lam_bar = -1j * (alpha + r.gamma_b)
    omega = 1j * np.sqrt(complex(1.0 + (alpha + 1j * r.delta_r) ** 2))
    q = r.delta_r - 1j * alpha
    return alpha, complex(lam_bar), complex(omega), complex(q)


def _sinc_c(z):
    """sin(z)/z for complex scalar or array input, series-stabilized near 0."""
    arr = np.asarray(z, dtype=complex)
    out = np.ones_like(arr)
    small = np.abs(arr) < SERIES_TOL
    zs = arr[small]
    z2 = zs * zs
    out[small] = 1.0 + z2 * (-1.0 / 6.0 + z2 * (1.0 / 120.0))
    zb = arr[~small]
    out[~small] = np.sin(zb) / zb
    return out if isinstance(z, np.ndarray) else complex(out)


def propagator(r: ReducedParams, tau: float,
               ep_switch: float = EP_SWITCH) -> Propagator2:
    """Evaluate exp(-i H tau) for the drift matrix of ``r``.

    Uses the Sylvester two-eigenvalue form away from coalescence and the
    defective form (identity plus nilpotent part, scaled by the single
    exponential) when |Omega| < ep_switch; divided differences are
    series-protected as described in the module docstring.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    _, lam_bar, omega, q = _structure(r)
    ew = np.exp(-1j * lam_bar * tau)
    if abs(omega) < ep_switch:
        # defective spectrum: exp(-i H tau) = e^{-i lb tau} (I - i (H - lb I) tau)
        off = ew * tau
        diag = 1j * q * tau
        return Propagator2(m11=complex(ew * (1.0 - diag)), m12=complex(off),
                           m21=complex(off), m22=complex(ew * (1.0 + diag)))
    z = omega * tau
    dd = -1j * tau * ew * _sinc_c(z)
    av = ew * np.cos(z)
    return Propagator2(
        m11=complex(q * dd + av),
        m12=complex(1j * dd),
        m21=complex(1j * dd),
        m22=complex(-q * dd + av),
    )


def _forced_integrals(r: ReducedParams, times: np.ndarray
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Integrals of the first propagator column, driving the two amplitudes.

    Returns (Ia, Ib) with Ia = int_0^t m11, Ib = int_0^t m21.  Near-zero
    eigenvalue product switches to quadrature (flagged via SingularProduct).
    """
    _, lam_bar, omega, q = _structure(r)
    pi_lambda = lam_bar * lam_bar - omega * omega
    if abs(pi_lambda) <= PI_TOL:
        warnings.warn(
            f"eigenvalue product |Pi| = {abs(pi_lambda):.3g} <= {PI_TOL}; "
            "forcing integrals evaluated by quadrature",
            SingularProduct, stacklevel=3)
        pairs = [_forced_quadrature(lam_bar, omega, q, float(t))
                 for t in times]
        ia = np.array([p[0] for p in pairs])
        ib = np.array([p[1] for p in pairs])
        return ia, ib
    z = omega * times
    ew = np.exp(-1j * lam_bar * times)
    sc = _sinc_c(np.asarray(z, dtype=complex))
    cz = np.cos(z)
    bracket = ew * (cz + 1j * lam_bar * times * sc) - 1.0
    ib = bracket / pi_lambda
    ia = 1j * (-q * bracket + ew * (lam_bar * cz + 1j * omega ** 2 * times * sc)
               - lam_bar) / pi_lambda
    return ia, ib


def _forced_quadrature(lam_bar: complex, omega: complex, q: complex,
                       t: float) -> tuple[complex, complex]:
    """Direct quadrature of the forcing integrals (marginal-mode fallback)."""
    from scipy.integrate import quad

    def m11(tau):
        ew = np.exp(-1j * lam_bar * tau)
        dd = -1j * tau * ew * _sinc_c(complex(omega * tau))
        return q * dd + ew * np.cos(omega * tau)

    def m21(tau):
        ew = np.exp(-1j * lam_bar * tau)
        return 1j * (-1j * tau * ew * _sinc_c(complex(omega * tau)))

    def integrate(f):
        re, _ = quad(lambda x: f(x).real, 0.0, t, limit=400,
                     epsabs=1e-13, epsrel=1e-13)
        im, _ = quad(lambda x: f(x).imag, 0.0, t, limit=400,
                     epsabs=1e-13, epsrel=1e-13)
        return complex(re, im)

    return integrate(m11), integrate(m21)


def trajectory_closed_form(r: ReducedParams, times: np.ndarray,
                           a0: complex = 0j, b0: complex = 0j
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized closed-form amplitudes (a(t), b(t)) on a time grid."""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("times must be >= 0")
    _, lam_bar, omega, q = _structure(r)
    z = np.asarray(omega * times, dtype=complex)
    ew = np.exp(-1j * lam_bar * times)
    sc = _sinc_c(z)
    dd = -1j * times * ew * sc
    av = ew * np.cos(z)
    m11 = q * dd + av
    m21 = 1j * dd
    m22 = -q * dd + av
    a = m11 * a0 + m21 * b0
    b = m21 * a0 + m22 * b0
    if r.eps_r != 0.0:
        ia, ib = _forced_integrals(r, times)
        a = a + r.eps_r * ia
        b = b + r.eps_r * ib
    return a, b


def amplitudes(r: ReducedParams, t: float,
               a0: complex = 0j, b0: complex = 0j) -> tuple[complex, complex]:
    """Mode amplitudes at time t; defaults to both modes starting empty."""
    a, b = trajectory_closed_form(r, np.array([float(t)]), a0, b0)
    return complex(a[0]), complex(b[0])


def battery_power(r: ReducedParams, a, b):
    """d|b|^2/dt from the equations of motion; broadcastable over arrays."""
    bdot = a + (1j * r.delta_r - r.gamma_b) * b
    return 2.0 * np.real(np.conj(b) * bdot)


def power(r: ReducedParams, t: float,
          a0: complex = 0j, b0: complex = 0j) -> float:
    """Rate of change of the stored energy at time t.

    Evaluated as 2 Re[conj(b) db/dt] with db/dt taken from the equations of
    motion, which avoids differentiating the energy closed form.
    """
    a, b = amplitudes(r, t, a0, b0)
    return float(battery_power(r, a, b))


def energy_record(r: ReducedParams, t: float,
                  a0: complex = 0j, b0: complex = 0j) -> EnergyRecord:
    a, b = amplitudes(r, t, a0, b0)
    return EnergyRecord(t=float(t), a=a, b=b, energy=abs(b) ** 2,
                        power=float(battery_power(r, a, b)))


def energy_general(r: ReducedParams, t: float,
                   ep_switch: float = EP_SWITCH) -> float:
    """Stored energy from the two-eigenvalue closed form (empty initial modes).

    Requires distinct eigenvalues; at coalescence use ``energy_ep``.  A
    near-zero eigenvalue product falls back to the quadrature route inside
    the forcing integrals (flagged by a SingularProduct warning).
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    _, _, omega, _ = _structure(r)
    if abs(omega) < ep_switch:
        raise DegenerateSpectrum(
            "eigenvalues coalesce (|Omega| < ep_switch); use energy_ep")
    _, ib = _forced_integrals(r, np.array([float(t)]))
    return float(abs(r.eps_r * ib[0]) ** 2)


def energy_ep(r: ReducedParams, t: float) -> float:
    """Stored energy exactly at a coalescence point.

    The defective mode gives the polynomial-times-exponential response

        b(t) = eps_r [ i e^{-i l0 t} / l0 (t - i/l0) - 1/l0^2 ],  l0 = -i gamma,

    which grows algebraically before settling to (eps_r / gamma^2)^2.  The
    undamped corner gamma = 0 degenerates to pure algebraic growth
    b = eps_r t^2 / 2.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    ok, why = ep_conditions(r.gamma_a, r.gamma_b, r.delta_r)
    if not ok:
        raise NotAtEP(why)
    gamma = 0.5 * (r.gamma_a + r.gamma_b)
    if gamma == 0.0:
        return float(abs(r.eps_r * t * t / 2.0) ** 2)
    lam0 = -1j * gamma
    b = r.eps_r * ((1j * np.exp(-1j * lam0 * t) / lam0) * (t - 1j / lam0)
                   - 1.0 / lam0 ** 2)
    return float(abs(b) ** 2)


def _sinhc(x):
    """sinh(x)/x, series-stabilized near 0."""
    x = float(x)
    if abs(x) < SERIES_TOL:
        x2 = x * x
        return 1.0 + x2 * (1.0 / 6.0 + x2 * (1.0 / 120.0))
    return math.sinh(x) / x


def _sinc_r(x):
    x = float(x)
    if abs(x) < SERIES_TOL:
        x2 = x * x
        return 1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0))
    return math.sin(x) / x


def energy_symmetric(r: ReducedParams, t: float, tol: float = 1e-9) -> float:
    """Stored energy for balanced damping (alpha = 0), explicit real form.

    For |delta_r| < 1 the splitting is imaginary and the response is
    hyperbolic (growing when |Omega| > gamma, relaxing otherwise); for
    |delta_r| > 1 it oscillates.  Both read

        E(t) = (eps_r/K)^2 (1 - e^{-gamma t} [gamma sinh(wt) + w cosh(wt)] / w)^2

    with K = delta_r^2 + gamma^2 - 1 and w = sqrt|1 - delta_r^2| (sinh/cosh
    become sin/cos in the oscillatory sector).  At |delta_r| = 1 the two
    branches meet the coalescence form, to which this delegates; on the
    phase boundary K -> 0 the prefactor is indeterminate and the quadrature
    route of the general solution is used instead.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if abs(r.alpha()) >= tol:
        raise AsymmetricParams(
            f"energy_symmetric needs gamma_a == gamma_b, got alpha = {r.alpha()}")
    gamma = 0.5 * (r.gamma_a + r.gamma_b)
    w2 = 1.0 - r.delta_r ** 2
    w = math.sqrt(abs(w2))
    if w < EP_SWITCH:
        return energy_ep(r, t)
    kay = r.delta_r ** 2 + gamma ** 2 - 1.0
    if abs(kay) <= PI_TOL:
        # marginal mode: same fallback the general route takes
        _, b = amplitudes(r, t)
        return float(abs(b) ** 2)
    if w2 > 0:
        bracket = 1.0 - math.exp(-gamma * t) * (
            gamma * t * _sinhc(w * t) + math.cosh(w * t))
    else:
        bracket = 1.0 - math.exp(-gamma * t) * (
            gamma * t * _sinc_r(w * t) + math.cos(w * t))
    return float((r.eps_r / kay) ** 2 * bracket ** 2)


def energy_asymptotic_broken(r: ReducedParams, t: float,
                             tol: float = 1e-9) -> float:
    """Late-time exponential envelope of the broken-phase energy.

    Valid for balanced damping with |Omega| > gamma and t >> 1/|Omega|; at
    small t it returns the bare prefactor, not the true (zero) energy, so it
    must not be used outside its asymptotic domain.
    """
    if abs(r.alpha()) >= tol:
        raise AsymmetricParams(
            f"asymptotic form needs gamma_a == gamma_b, got alpha = {r.alpha()}")
    gamma = 0.5 * (r.gamma_a + r.gamma_b)
    w2 = 1.0 - r.delta_r ** 2
    if w2 <= 0:
        raise NotBroken(f"|delta_r| = {abs(r.delta_r)} >= 1: no growing mode")
    w = math.sqrt(w2)
    if w <= gamma:
        raise NotBroken(
            f"|Omega| = {w:g} <= gamma = {gamma:g}: dynamics are bounded")
    kay = r.delta_r ** 2 + gamma ** 2 - 1.0
    prefactor = (r.eps_r / kay) ** 2 * ((gamma + w) / (2.0 * w)) ** 2
    return float(prefactor * math.exp(2.0 * (w - gamma) * t))
