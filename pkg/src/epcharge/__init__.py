"""Simulator and analysis toolkit for a dissipatively coupled two-mode
charger-battery system whose drift matrix hosts engineered exceptional
points.

Submodules: ``model`` (physical and reduced parameters, adiabatic
elimination), ``spectral`` (eigensystem and phase classification),
``propagator`` (closed-form dynamics and energies), ``integrator``
(independent RK4 oracle and quench protocol), ``sweep`` (phase diagrams and
critical-time curves), ``cli`` (command-line entry point).
"""

__version__ = "0.1.0"

from .model import PhysicalParams, ReducedParams, reduce, separation_ratio
from .spectral import (DriftMatrix, PhaseRegime, Regime, Spectrum,
                       boundary_alpha, classify, drift_matrix, eigensystem,
                       ep_conditions, routh_hurwitz_stable)
from .propagator import (EnergyRecord, Propagator2, amplitudes,
                         energy_asymptotic_broken, energy_ep, energy_general,
                         energy_symmetric, power, propagator)
from .integrator import (QuenchSchedule, Trajectory, integrate_full,
                         integrate_quench, integrate_reduced)
from .sweep import (CritTimeCurve, PhaseGrid, dynamics_panel,
                    eigenvalue_profile, phase_diagram, tcrit_curve)

__all__ = [
    "PhysicalParams", "ReducedParams", "reduce", "separation_ratio",
    "DriftMatrix", "Spectrum", "PhaseRegime", "Regime", "drift_matrix",
    "eigensystem", "classify", "ep_conditions", "routh_hurwitz_stable",
    "boundary_alpha",
    "Propagator2", "EnergyRecord", "propagator", "amplitudes",
    "energy_general", "energy_ep", "energy_symmetric",
    "energy_asymptotic_broken", "power",
    "Trajectory", "QuenchSchedule", "integrate_full", "integrate_reduced",
    "integrate_quench",
    "PhaseGrid", "CritTimeCurve", "phase_diagram", "eigenvalue_profile",
    "dynamics_panel", "tcrit_curve",
]
