"""Numpy implementations of the compiled kernels, used when the extension is absent.

The arithmetic is ordered exactly as in ``_ckernels.pyx``.
"""

import numpy as np

OK, ESCAPED, SINGULAR = 0, 1, 2


def sweep(cs, uv, transient, keep, escape_radius, singular_tol=1e-12):
    """Iterate the critical orbit for each parameter; return (first, second, status)."""
    cs = np.ascontiguousarray(cs, dtype=float)
    m = cs.shape[0]
    out = np.full((m, keep), np.nan)
    out2 = np.full((m, keep), np.nan)
    status = np.zeros(m, dtype=np.int8)
    if uv:
        a = cs.copy()
        b = cs * cs + cs
    else:
        a = np.zeros(m)
        b = cs.copy()
    live = np.ones(m, dtype=bool)
    with np.errstate(all="ignore"):
        for i in range(transient + keep):
            if uv:
                sing = live & (np.abs(a) < singular_tol)
                status[sing] = SINGULAR
                live &= ~sing
                g = b + b / a - 1.0
                b = np.where(live, g * (1.0 + b - a), b)
                a = np.where(live, g, a)
            else:
                t = b
                b = np.where(live, b * b + b - a * a, b)
                a = np.where(live, t, a)
            esc = live & ~((np.abs(a) <= escape_radius) & (np.abs(b) <= escape_radius))
            status[esc] = ESCAPED
            live &= ~esc
            if i >= transient:
                out[live, i - transient] = a[live]
                out2[live, i - transient] = b[live]
    out[status != OK] = np.nan
    out2[status != OK] = np.nan
    return out, out2, status


def eval_grid(coeffs, us, vs):
    """``out[j, i] = sum_{a,b} coeffs[a, b] * us[i]**a * vs[j]**b``."""
    coeffs = np.asarray(coeffs, dtype=float)
    us = np.asarray(us, dtype=float)
    vs = np.asarray(vs, dtype=float)
    du, dv = coeffs.shape
    rows = np.zeros((vs.shape[0], du))
    for b in range(dv - 1, -1, -1):
        rows = rows * vs[:, None] + coeffs[:, b][None, :]
    out = np.zeros((vs.shape[0], us.shape[0]))
    for a in range(du - 1, -1, -1):
        out = out * us[None, :] + rows[:, a][:, None]
    return out
