"""Pure-Python RK4 stepping kernels.

Fallback twin of the compiled module ``_kernels_cy``; the two must stay
operation-for-operation identical so results agree to rounding.
Samples are written every ``stride`` steps, including step 0.
"""

from __future__ import annotations

import numpy as np


def rk4_reduced(caa: complex, cbb: complex, drive: complex,
                a0: complex, b0: complex,
                dt: float, n_steps: int, stride: int):
    """Fixed-step RK4 for da/dt = caa*a + b + drive, db/dt = a + cbb*b."""
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")
    n_out = n_steps // stride + 1
    a_out = np.empty(n_out, dtype=np.complex128)
    b_out = np.empty(n_out, dtype=np.complex128)
    a = complex(a0)
    b = complex(b0)
    a_out[0] = a
    b_out[0] = b
    h = float(dt)
    h2 = 0.5 * h
    h6 = h / 6.0
    idx = 1
    for step in range(1, n_steps + 1):
        k1a = caa * a + b + drive
        k1b = a + cbb * b
        a2 = a + h2 * k1a
        b2 = b + h2 * k1b
        k2a = caa * a2 + b2 + drive
        k2b = a2 + cbb * b2
        a3 = a + h2 * k2a
        b3 = b + h2 * k2b
        k3a = caa * a3 + b3 + drive
        k3b = a3 + cbb * b3
        a4 = a + h * k3a
        b4 = b + h * k3b
        k4a = caa * a4 + b4 + drive
        k4b = a4 + cbb * b4
        a = a + h6 * (k1a + 2.0 * (k2a + k3a) + k4a)
        b = b + h6 * (k1b + 2.0 * (k2b + k3b) + k4b)
        if step == idx * stride:
            a_out[idx] = a
            b_out[idx] = b
            idx += 1
    return a_out, b_out


def rk4_full(caa: complex, cac: complex,
             cbb: complex, cbc: complex,
             cca: complex, ccb: complex, ccc: complex,
             drive: complex,
             a0: complex, b0: complex, c0: complex,
             dt: float, n_steps: int, stride: int):
    """Fixed-step RK4 for the three-mode linear system.

    da/dt = caa*a + cac*c + drive
    db/dt = cbb*b + cbc*c
    dc/dt = cca*a + ccb*b + ccc*c
    """
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")
    n_out = n_steps // stride + 1
    a_out = np.empty(n_out, dtype=np.complex128)
    b_out = np.empty(n_out, dtype=np.complex128)
    c_out = np.empty(n_out, dtype=np.complex128)
    a = complex(a0)
    b = complex(b0)
    c = complex(c0)
    a_out[0] = a
    b_out[0] = b
    c_out[0] = c
    h = float(dt)
    h2 = 0.5 * h
    h6 = h / 6.0
    idx = 1
    for step in range(1, n_steps + 1):
        k1a = caa * a + cac * c + drive
        k1b = cbb * b + cbc * c
        k1c = cca * a + ccb * b + ccc * c
        a2 = a + h2 * k1a
        b2 = b + h2 * k1b
        c2 = c + h2 * k1c
        k2a = caa * a2 + cac * c2 + drive
        k2b = cbb * b2 + cbc * c2
        k2c = cca * a2 + ccb * b2 + ccc * c2
        a3 = a + h2 * k2a
        b3 = b + h2 * k2b
        c3 = c + h2 * k2c
        k3a = caa * a3 + cac * c3 + drive
        k3b = cbb * b3 + cbc * c3
        k3c = cca * a3 + ccb * b3 + ccc * c3
        a4 = a + h * k3a
        b4 = b + h * k3b
        c4 = c + h * k3c
        k4a = caa * a4 + cac * c4 + drive
        k4b = cbb * b4 + cbc * c4
        k4c = cca * a4 + ccb * b4 + ccc * c4
        a = a + h6 * (k1a + 2.0 * (k2a + k3a) + k4a)
        b = b + h6 * (k1b + 2.0 * (k2b + k3b) + k4b)
        c = c + h6 * (k1c + 2.0 * (k2c + k3c) + k4c)
        if step == idx * stride:
            a_out[idx] = a
            b_out[idx] = b
            c_out[idx] = c
            idx += 1
    return a_out, b_out, c_out
