# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 stepping kernels.

Operation-for-operation identical to the pure-Python twin ``_kernels_py`` so
that both backends agree to rounding.
"""

import numpy as np


def rk4_reduced(double complex caa, double complex cbb, double complex drive,
                double complex a0, double complex b0,
                double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    """Fixed-step RK4 for da/dt = caa*a + b + drive, db/dt = a + cbb*b."""
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")
    cdef Py_ssize_t n_out = n_steps // stride + 1
    a_np = np.empty(n_out, dtype=np.complex128)
    b_np = np.empty(n_out, dtype=np.complex128)
    cdef double complex[::1] a_out = a_np
    cdef double complex[::1] b_out = b_np
    cdef double complex a = a0, b = b0
    cdef double complex k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b
    cdef double complex a2, b2, a3, b3, a4, b4
    cdef double h = dt, h2 = 0.5 * dt, h6 = dt / 6.0
    cdef Py_ssize_t step, idx = 1
    a_out[0] = a
    b_out[0] = b
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
    return a_np, b_np


def rk4_full(double complex caa, double complex cac,
             double complex cbb, double complex cbc,
             double complex cca, double complex ccb, double complex ccc,
             double complex drive,
             double complex a0, double complex b0, double complex c0,
             double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    """Fixed-step RK4 for the three-mode linear system."""
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")
    cdef Py_ssize_t n_out = n_steps // stride + 1
    a_np = np.empty(n_out, dtype=np.complex128)
    b_np = np.empty(n_out, dtype=np.complex128)
    c_np = np.empty(n_out, dtype=np.complex128)
    cdef double complex[::1] a_out = a_np
    cdef double complex[::1] b_out = b_np
    cdef double complex[::1] c_out = c_np
    cdef double complex a = a0, b = b0, c = c0
    cdef double complex k1a, k1b, k1c, k2a, k2b, k2c
    cdef double complex k3a, k3b, k3c, k4a, k4b, k4c
    cdef double complex a2, b2, c2, a3, b3, c3, a4, b4, c4
    cdef double h = dt, h2 = 0.5 * dt, h6 = dt / 6.0
    cdef Py_ssize_t step, idx = 1
    a_out[0] = a
    b_out[0] = b
    c_out[0] = c
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
    return a_np, b_np, c_np
