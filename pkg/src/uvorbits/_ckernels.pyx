# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: bifurcation sweep and dense polynomial grid evaluation.

Both functions mirror :mod:`uvorbits._pykernels` operation for operation so
the two backends return identical floating-point results.
"""

import numpy as np

from libc.math cimport NAN, fabs

cdef enum:
    OK = 0
    ESCAPED = 1
    SINGULAR = 2


def sweep(double[::1] cs, bint uv, long transient, long keep, double escape_radius,
          double singular_tol=1e-12):
    """Iterate the critical orbit for each parameter; return (first, second, status)."""
    cdef Py_ssize_t m = cs.shape[0]
    out = np.full((m, keep), np.nan)
    out2 = np.full((m, keep), np.nan)
    status = np.zeros(m, dtype=np.int8)
    cdef double[:, ::1] o = out
    cdef double[:, ::1] o2 = out2
    cdef signed char[::1] st = status
    cdef Py_ssize_t k, i
    cdef long total = transient + keep
    cdef double a, b, g, t, c
    for k in range(m):
        c = cs[k]
        if uv:
            a = c
            b = c * c + c
        else:
            a = 0.0
            b = c
        for i in range(total):
            if uv:
                if fabs(a) < singular_tol:
                    st[k] = SINGULAR
                    break
                g = b + b / a - 1.0
                b = g * (1.0 + b - a)
                a = g
            else:
                t = b
                b = b * b + b - a * a
                a = t
            if not (fabs(a) <= escape_radius and fabs(b) <= escape_radius):
                st[k] = ESCAPED
                break
            if i >= transient:
                o[k, i - transient] = a
                o2[k, i - transient] = b
        if st[k] != OK:
            for i in range(keep):
                o[k, i] = NAN
                o2[k, i] = NAN
    return out, out2, status


def eval_grid(double[:, ::1] coeffs, double[::1] us, double[::1] vs):
    """``out[j, i] = sum_{a,b} coeffs[a, b] * us[i]**a * vs[j]**b``."""
    cdef Py_ssize_t du = coeffs.shape[0], dv = coeffs.shape[1]
    cdef Py_ssize_t nx = us.shape[0], ny = vs.shape[0]
    out = np.empty((ny, nx))
    cdef double[:, ::1] o = out
    rows = np.empty((ny, du))
    cdef double[:, ::1] r = rows
    cdef Py_ssize_t i, j, a, b
    cdef double acc, v, u
    # Horner in v for each u-power, then Horner in u.
    for j in range(ny):
        v = vs[j]
        for a in range(du):
            acc = 0.0
            for b in range(dv - 1, -1, -1):
                acc = acc * v + coeffs[a, b]
            r[j, a] = acc
    for j in range(ny):
        for i in range(nx):
            u = us[i]
            acc = 0.0
            for a in range(du - 1, -1, -1):
                acc = acc * u + r[j, a]
            o[j, i] = acc
    return out
