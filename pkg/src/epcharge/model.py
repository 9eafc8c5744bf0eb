"""Parameter sets for the dissipatively coupled charger-battery pair.

Two levels of description are kept side by side:

* ``PhysicalParams`` carries the raw rates of the three-mode system: a driven
  charger mode ``a``, a storage mode ``b``, and a strongly damped auxiliary
  mode ``c`` that both of them dump into through shared lossy channels.
* ``ReducedParams`` is the dimensionless two-mode model obtained after the
  overdamped auxiliary mode is eliminated adiabatically.  All rates are
  expressed in units of the effective dissipative coupling rate, and time in
  the dynamics modules is measured in units of its inverse.

``reduce`` performs the elimination; ``separation_ratio`` quantifies how well
the underlying time-scale separation holds for a given parameter set.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import AsymmetricDetuning, NegativeDamping, ZeroCoupling

#: relative tolerance for the delta_a = -delta_b check in reduce()
DETUNING_RTOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    """Raw three-mode parameters, all rates in the same frequency unit (hbar = 1).

    ``delta_j`` are detunings of the mode frequencies from the drive frequency.
    ``kappa_j`` are local damping rates into independent baths.  ``Gamma`` is
    the rate of the two shared reservoirs; ``p_a``, ``p_b`` weight the charger
    and battery in their shared-channel jump operators, while ``p_c_a`` and
    ``p_c_b`` weight the auxiliary mode in each of them.  ``drive_eps`` is the
    amplitude of the coherent drive on the charger.
    """

    delta_a: float
    delta_b: float
    kappa_a: float
    kappa_b: float
    kappa_c: float
    Gamma: float
    p_a: complex
    p_b: complex
    p_c_a: complex
    p_c_b: complex
    drive_eps: float = 0.0
    delta_c: float = 0.0

    def __post_init__(self) -> None:
        for name in ("kappa_a", "kappa_b", "kappa_c", "Gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.drive_eps < 0:
            raise ValueError("drive_eps must be >= 0")
        for name in ("p_a", "p_b", "p_c_a", "p_c_b"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    # shared-channel rates derived on demand
    def big_gamma_a(self) -> float:
        return self.Gamma * abs(self.p_a) ** 2

    def big_gamma_b(self) -> float:
        return self.Gamma * abs(self.p_b) ** 2

    def big_gamma_c_a(self) -> float:
        return self.Gamma * abs(self.p_c_a) ** 2

    def big_gamma_c_b(self) -> float:
        return self.Gamma * abs(self.p_c_b) ** 2

    def mu_ca(self) -> complex:
        return self.p_c_a * self.p_a.conjugate()

    def mu_cb(self) -> complex:
        return self.p_c_b * self.p_b.conjugate()


@dataclass(frozen=True)
class ReducedParams:
    """Dimensionless two-mode parameters after adiabatic elimination.

    ``gamma_a``/``gamma_b`` are the effective damping rates of charger and
    battery, ``delta_r`` the detuning and ``eps_r`` the drive amplitude, all
    in units of ``gamma_eff`` (the dissipative coupling rate used for the
    time rescaling; keep the default 1.0 when working directly in
    dimensionless form).
    """

    gamma_a: float
    gamma_b: float
    delta_r: float
    eps_r: float = 0.0
    gamma_eff: float = 1.0

    def __post_init__(self) -> None:
        if self.gamma_a < 0 or self.gamma_b < 0:
            raise ValueError("effective damping rates must be >= 0")
        if self.eps_r < 0:
            raise ValueError("eps_r must be >= 0")
        if not self.gamma_eff > 0:
            raise ValueError("gamma_eff must be > 0")

    def alpha(self) -> float:
        """Damping asymmetry (gamma_a - gamma_b) / 2."""
        return 0.5 * (self.gamma_a - self.gamma_b)

    def gamma(self) -> float:
        """Common damping rate; only defined for symmetric damping."""
        from .errors import AsymmetricParams

        scale = max(1.0, abs(self.gamma_a), abs(self.gamma_b))
        if abs(self.gamma_a - self.gamma_b) > 1e-12 * scale:
            raise AsymmetricParams(
                f"gamma() requires gamma_a == gamma_b, got "
                f"{self.gamma_a} and {self.gamma_b}"
            )
        return self.gamma_a


@dataclass(frozen=True)
class ReductionDiagnostics:
    """Bookkeeping record produced alongside the reduction.

    ``coupling_scale`` is the factor |mu_ca * mu_cb| absorbed into the raw
    effective rate so the off-diagonal coupling is exactly 1 in reduced
    units; ``gauge_phase`` is the phase arg(mu_ca * conj(mu_cb)) rotated
    onto the battery amplitude for the same purpose.  Both are needed when
    comparing reduced-model amplitudes against the full three-mode model.
    """

    gamma_eff: float
    raw_gamma_eff: float
    coupling_scale: float
    gauge_phase: float
    big_gamma_a: float
    big_gamma_b: float
    big_gamma_c_a: float
    big_gamma_c_b: float
    abs_mu_ca: float
    abs_mu_cb: float
    separation_ratio: float


def effective_damping(kappa: float, big_gamma: float, mu_abs_sq: float,
                      raw_gamma_eff: float, gamma_eff: float) -> float:
    """Dimensionless damping (kappa + Gamma_j - |mu|^2 Gamma_eff) / gamma_eff.

    The negative term is the footprint of the eliminated auxiliary mode:
    interference between the local loss channel and the shared one.
    """
    return (kappa + big_gamma - mu_abs_sq * raw_gamma_eff) / gamma_eff


def reduction_diagnostics(p: PhysicalParams) -> ReductionDiagnostics:
    """Compute the elimination bookkeeping for ``p`` without building ReducedParams."""
    _check_couplings(p)
    fast_rate = p.kappa_c + p.big_gamma_c_a() + p.big_gamma_c_b()
    if not fast_rate > 0:
        raise ZeroCoupling(
            "auxiliary mode has no relaxation channel "
            "(kappa_c + shared-channel rates must be > 0)"
        )
    raw_gamma_eff = p.Gamma ** 2 / fast_rate
    mu_ca, mu_cb = p.mu_ca(), p.mu_cb()
    coupling_scale = abs(mu_ca) * abs(mu_cb)
    gamma_eff = coupling_scale * raw_gamma_eff
    return ReductionDiagnostics(
        gamma_eff=gamma_eff,
        raw_gamma_eff=raw_gamma_eff,
        coupling_scale=coupling_scale,
        gauge_phase=cmath.phase(mu_ca * mu_cb.conjugate()),
        big_gamma_a=p.big_gamma_a(),
        big_gamma_b=p.big_gamma_b(),
        big_gamma_c_a=p.big_gamma_c_a(),
        big_gamma_c_b=p.big_gamma_c_b(),
        abs_mu_ca=abs(mu_ca),
        abs_mu_cb=abs(mu_cb),
        separation_ratio=separation_ratio(p),
    )


def reduce(p: PhysicalParams) -> ReducedParams:
    """Adiabatically eliminate the auxiliary mode and return the two-mode model.

    Preconditions: all coupling weights nonzero, the auxiliary mode strongly
    relaxing, delta_a = -delta_b within tolerance and delta_c exactly zero.
    The coupling normalization |mu| = 1 is applied here by absorbing the
    residual factor into the effective rate (see ReductionDiagnostics).
    """
    diag = reduction_diagnostics(p)

    if p.delta_c != 0.0:
        raise AsymmetricDetuning(
            f"auxiliary-mode detuning must be exactly 0, got {p.delta_c}"
        )
    scale = max(abs(p.delta_a), abs(p.delta_b), 1e-300)
    if abs(p.delta_a + p.delta_b) > DETUNING_RTOL * max(1.0, scale):
        raise AsymmetricDetuning(
            f"need delta_a = -delta_b, got {p.delta_a} and {p.delta_b}"
        )

    gamma_a = effective_damping(p.kappa_a, diag.big_gamma_a,
                                diag.abs_mu_ca ** 2, diag.raw_gamma_eff,
                                diag.gamma_eff)
    gamma_b = effective_damping(p.kappa_b, diag.big_gamma_b,
                                diag.abs_mu_cb ** 2, diag.raw_gamma_eff,
                                diag.gamma_eff)
    for name, g in (("gamma_a", gamma_a), ("gamma_b", gamma_b)):
        if g < -1e-12:
            raise NegativeDamping(f"computed {name} = {g} < 0")
    # clamp roundoff residue from the exact-cancellation corner
    gamma_a = max(gamma_a, 0.0)
    gamma_b = max(gamma_b, 0.0)

    return ReducedParams(
        gamma_a=gamma_a,
        gamma_b=gamma_b,
        delta_r=p.delta_a / diag.gamma_eff,
        eps_r=p.drive_eps / diag.gamma_eff,
        gamma_eff=diag.gamma_eff,
    )


def separation_ratio(p: PhysicalParams) -> float:
    """Fast-to-slow rate ratio that controls the adiabatic-elimination error.

    Returns (kappa_c + shared-channel rates of c) over the largest slow rate
    or detuning; +inf when the slow scales all vanish.  Values well above 1
    justify the reduced model.
    """
    fast = p.kappa_c + p.big_gamma_c_a() + p.big_gamma_c_b()
    slow = max(p.kappa_a + p.big_gamma_a(), p.kappa_b + p.big_gamma_b(),
               abs(p.delta_a), abs(p.delta_b))
    if slow == 0.0:
        return math.inf
    return fast / slow


def _check_couplings(p: PhysicalParams) -> None:
    if p.p_a == 0 or p.p_b == 0:
        raise ZeroCoupling("p_a and p_b must be nonzero for the reduction")
    if p.p_c_a == 0 or p.p_c_b == 0:
        raise ZeroCoupling("p_c_a and p_c_b must be nonzero for the reduction")
    if p.Gamma == 0:
        raise ZeroCoupling("Gamma must be > 0 for the reduction")
