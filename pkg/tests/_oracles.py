"""Independent numerical oracles used by the test suite.

Nothing here imports the closed-form code paths it is used to check:
the matrix exponential is a plain scaled Taylor series, the eigensolver is
the quadratic formula on the characteristic polynomial.
"""

from __future__ import annotations

import cmath

import numpy as np

from epcharge.model import ReducedParams


def expm_taylor(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) by scaling-and-squaring with a plain Taylor sum."""
    A = -1j * np.asarray(H, dtype=complex) * t
    norm = float(np.abs(A).sum())
    squarings = max(0, int(np.ceil(np.log2(max(norm, 1e-300)))) + 1) \
        if norm > 0.5 else 0
    A = A / (2 ** squarings)
    E = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for k in range(1, 60):
        term = term @ A / k
        E = E + term
        if np.abs(term).max() < 1e-20:
            break
    for _ in range(squarings):
        E = E @ E
    return E


def eig_quadratic(H: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues of a 2x2 matrix from the characteristic polynomial."""
    tr = H[0, 0] + H[1, 1]
    det = H[0, 0] * H[1, 1] - H[0, 1] * H[1, 0]
    disc = cmath.sqrt(tr * tr - 4.0 * det)
    return (tr + disc) / 2.0, (tr - disc) / 2.0


def sorted_pair(vals) -> list[complex]:
    return sorted((complex(v) for v in vals),
                  key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def random_reduced(rng: np.random.Generator,
                   eps_lo: float = 0.2, eps_hi: float = 2.0) -> ReducedParams:
    """A random reduced parameter set spanning all spectral regimes."""
    gamma_b = rng.uniform(0.05, 2.0)
    alpha = rng.uniform(-0.5 * gamma_b, 1.5)
    return ReducedParams(
        gamma_a=gamma_b + 2.0 * alpha,
        gamma_b=gamma_b,
        delta_r=rng.uniform(-3.0, 3.0),
        eps_r=rng.uniform(eps_lo, eps_hi),
    )
