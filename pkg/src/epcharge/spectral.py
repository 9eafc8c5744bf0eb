"""Drift matrix, eigensystem, coalescence conditions and phase classification.

The reduced first-moment dynamics are d/dt (a, b) = -i H (a, b) + (eps_r, 0),
with the dimensionless non-Hermitian drift matrix

    H = [[delta_r - i*gamma_a, i], [i, -delta_r - i*gamma_b]].

Its eigenvalues are lambda_pm = -i (alpha + gamma_b) +/- Omega with
Omega = i sqrt(1 + (alpha + i delta_r)^2) and alpha = (gamma_a - gamma_b)/2.
The sign of Re[-i lambda] decides between bounded (unbroken) and exponentially
growing (broken) dynamics; Omega = 0 marks a genuine second-order exceptional
point where eigenvalues and eigenvectors coalesce.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NoBracket
from .model import ReducedParams

#: classification band around growth rate zero
BOUNDARY_TOL = 1e-9
#: coalescence threshold on |Omega|
EP_TOL = 1e-9


@dataclass(frozen=True)
class DriftMatrix:
    """The 2x2 dimensionless drift matrix, row-major."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def trace(self) -> complex:
        return self.m11 + self.m22

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues, splitting and eigenvectors of the drift matrix.

    ``omega`` uses the principal square root, which puts the dominant growth
    rate on ``lambda_plus``.  ``defective`` flags coalescence (|omega| below
    the EP threshold), in which case the two eigenvectors are parallel.
    """

    lambda_plus: complex
    lambda_minus: complex
    omega: complex
    alpha: float
    eigvec_plus: tuple[complex, complex]
    eigvec_minus: tuple[complex, complex]
    pi_lambda: complex
    delta_lambda: complex
    defective: bool


class Regime(enum.Enum):
    UNBROKEN = "Unbroken"
    BROKEN = "Broken"
    EXCEPTIONAL_POINT = "ExceptionalPoint"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class PhaseRegime:
    """Classification tag plus the growth rate it was derived from."""

    tag: Regime
    growth_rate: float


def drift_matrix(r: ReducedParams) -> DriftMatrix:
    """Assemble the dimensionless drift matrix from reduced parameters."""
    return DriftMatrix(
        m11=r.delta_r - 1j * r.gamma_a,
        m12=1j,
        m21=1j,
        m22=-r.delta_r - 1j * r.gamma_b,
    )


def eigensystem(r: ReducedParams, ep_tol: float = EP_TOL) -> Spectrum:
    """Closed-form eigensystem of the drift matrix.

    Coalescence is not an error: both eigenvalues are returned equal and the
    spectrum is flagged defective.
    """
    alpha = r.alpha()
    lam_bar = -1j * (alpha + r.gamma_b)
    s = np.sqrt(complex(1.0, 0.0) + (alpha + 1j * r.delta_r) ** 2)
    omega = 1j * s
    lam_p = lam_bar + omega
    lam_m = lam_bar - omega
    vec_p = (-alpha - 1j * (r.delta_r + omega), 1.0 + 0j)
    vec_m = (-alpha - 1j * (r.delta_r - omega), 1.0 + 0j)
    return Spectrum(
        lambda_plus=complex(lam_p),
        lambda_minus=complex(lam_m),
        omega=complex(omega),
        alpha=alpha,
        eigvec_plus=(complex(vec_p[0]), complex(vec_p[1])),
        eigvec_minus=(complex(vec_m[0]), complex(vec_m[1])),
        pi_lambda=complex(lam_p * lam_m),
        delta_lambda=complex(lam_p - lam_m),
        defective=bool(abs(omega) < ep_tol),
    )


def classify(s: Spectrum, tol: float = BOUNDARY_TOL,
             ep_tol: float = EP_TOL) -> PhaseRegime:
    """Label a spectrum as Unbroken / Broken / Boundary / ExceptionalPoint.

    The growth rate is the maximum of Re[-i lambda] over both eigenvalues, so
    the label does not depend on which root carries the + branch.
    """
    growth = max((-1j * s.lambda_plus).real, (-1j * s.lambda_minus).real)
    if abs(s.omega) < ep_tol:
        tag = Regime.EXCEPTIONAL_POINT
    elif growth < -tol:
        tag = Regime.UNBROKEN
    elif growth > tol:
        tag = Regime.BROKEN
    else:
        tag = Regime.BOUNDARY
    return PhaseRegime(tag=tag, growth_rate=growth)


def ep_conditions(gamma_a: float, gamma_b: float, delta_r: float,
                  tol: float = EP_TOL) -> tuple[bool, str]:
    """Check the coalescence conditions gamma_a = gamma_b and |delta_r| = 1.

    Returns (flag, diagnostics).  The diagnostics spell out which condition
    failed; in particular, at delta_r = 0 the splitting would need
    (gamma_a - gamma_b)^2 + 4 = 0, which has no real solution, so balanced
    damping alone is never enough.
    """
    if abs(gamma_a - gamma_b) >= tol:
        return False, (
            f"coalescence needs gamma_a = gamma_b; got asymmetry "
            f"{gamma_a - gamma_b:g}"
        )
    if abs(abs(delta_r) - 1.0) >= tol:
        if abs(delta_r) < tol:
            return False, (
                "no coalescence at delta_r = 0: with balanced damping the "
                "splitting satisfies (gamma_a - gamma_b)^2 + 4 = 0, which "
                "has no real solution"
            )
        return False, (
            f"coalescence needs |delta_r| = 1; got delta_r = {delta_r:g}"
        )
    return True, "eigenvalues coalesce: balanced damping and |delta_r| = 1"


def routh_hurwitz_stable(r: ReducedParams) -> bool:
    """Algebraic stability test on the characteristic polynomial.

    Written in the growth variable s = -i lambda the polynomial is
    s^2 + a1 s + (a0 + i b0) with a1 = 2 (alpha + gamma_b) real.  For a
    monic complex quadratic with real linear coefficient, both roots have
    negative real part iff a1 > 0 and a1^2 a0 > b0^2 (Bilharz form of the
    Routh-Hurwitz conditions).  No square roots or eigensolves involved.
    """
    alpha = r.alpha()
    a1 = 2.0 * (alpha + r.gamma_b)
    a0 = 2.0 * alpha * r.gamma_b + r.gamma_b ** 2 + r.delta_r ** 2 - 1.0
    b0 = -2.0 * alpha * r.delta_r
    return a1 > 0.0 and a1 * a1 * a0 > b0 * b0


def dominant_growth(gamma_b, alpha, delta_r):
    """Growth rate Re[-i lambda_+] as a plain function; numpy-broadcastable."""
    s = np.sqrt(1.0 + (np.asarray(alpha) + 1j * np.asarray(delta_r)) ** 2)
    return np.real(s) - (np.asarray(alpha) + gamma_b)


def boundary_alpha(gamma_b: float, delta_r: float, *,
                   alpha_max: float | None = None,
                   xtol: float = 1e-12) -> float | None:
    """Asymmetry alpha* where the growth rate crosses zero at fixed detuning.

    Searches alpha >= -gamma_b/2 (charger damping nonnegative).  When
    ``alpha_max`` is given the search is confined to that window and None is
    returned if the growth rate keeps one sign on it; otherwise the window is
    expanded until the crossing guaranteed by the large-alpha decay is
    bracketed.  The first (lowest-alpha) crossing is returned.
    """
    if not gamma_b > 0:
        raise ValueError("gamma_b must be > 0")
    lo_edge = -0.5 * gamma_b
    expand = alpha_max is None
    hi_edge = max(3.0, lo_edge + 1.0) if expand else float(alpha_max)
    if hi_edge <= lo_edge:
        raise ValueError("alpha_max must exceed -gamma_b/2")

    def f(a):
        return dominant_growth(gamma_b, a, delta_r)

    for _ in range(64):
        grid = np.linspace(lo_edge, hi_edge, 513)
        vals = f(grid)
        exact = np.nonzero(vals == 0.0)[0]
        if exact.size:
            return float(grid[exact[0]])
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if flips.size:
            lo, hi = float(grid[flips[0]]), float(grid[flips[0] + 1])
            break
        if not expand:
            return None
        if vals[-1] < 0.0:
            # negative on the whole domain seen so far and decaying further out
            return None
        hi_edge *= 2.0
    else:
        raise NoBracket(
            f"no sign change of the growth rate up to alpha = {hi_edge:g}"
        )

    flo = float(f(lo))
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fm = float(f(mid))
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
