"""Numerical root finding: univariate Aberth iteration and 2-D Newton polishing.

Everything runs in an mpmath context of the requested binary precision, and
every loop has a fixed order, so identical inputs give bitwise-identical
output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._mp import DEFAULT_PRECISION, context, to_mpc
from .bipoly import BiPoly, RatFunc
from .dynamics import CPoint
from .errors import Diverged, NoConvergence, SingularJacobian
from .unipoly import UniPoly

__all__ = [
    "Root",
    "RootSet",
    "solve_univariate",
    "newton_polish_2d",
    "real_filter",
    "solve_numeric",
    "MAX_SWEEPS",
]

MAX_SWEEPS = 2000
_GOLDEN = (math.sqrt(5) - 1) / 2
_CLUSTER_FACTOR = 10
_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class Root:
    value: object  # mpc
    error: float
    multiplicity: int = 1

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0


@dataclass(frozen=True)
class RootSet:
    """Roots of a univariate polynomial with error bounds and multiplicities."""

    roots: tuple
    residuals: tuple
    degree: int
    converged: bool = True

    def values(self) -> list:
        return [r.value for r in self.roots]

    def with_multiplicity(self) -> list:
        out = []
        for r in self.roots:
            out.extend([r.value] * r.multiplicity)
        return out

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "converged": self.converged,
            "roots": [
                {
                    "re": float(r.value.real),
                    "im": float(r.value.imag),
                    "error": r.error,
                    "multiplicity": r.multiplicity,
                    "residual": res,
                }
                for r, res in zip(self.roots, self.residuals)
            ],
        }


def _mpq(ctx, c):
    if isinstance(c, int):
        return ctx.mpf(c)
    c = Fraction(c)
    return ctx.mpf(c.numerator) / c.denominator


def _aberth(coeffs, ctx, max_sweeps: int):
    """Simultaneous roots of a squarefree polynomial (ascending coefficients, exact or mp)."""
    n = len(coeffs) - 1
    a = [c if isinstance(c, (ctx.mpf, ctx.mpc)) else _mpq(ctx, c) for c in coeffs]
    desc = a[::-1]
    if n == 1:
        z = -a[0] / a[1]
        return [ctx.mpc(z)], True
    lead = abs(a[-1])
    radius = 1 + max(abs(c) / lead for c in a[:-1])
    offset = 2 * ctx.pi * _GOLDEN / n
    z = [radius * ctx.expj(2 * ctx.pi * k / n + offset) for k in range(n)]
    tol = ctx.mpf(2) ** (-(ctx.prec // 2))
    converged = False
    extra = False
    for _ in range(max_sweeps):
        worst = ctx.mpf(0)
        for k in range(n):
            zk = z[k]
            pz, dpz = ctx.polyval(desc, zk, derivative=True)
            if pz == 0:
                continue
            s = ctx.mpc(0)
            for j in range(n):
                if j != k:
                    s += 1 / (zk - z[j])
            ratio = pz / dpz if dpz != 0 else ctx.mpc(1e-3)
            w = ratio / (1 - ratio * s)
            z[k] = zk - w
            rel = abs(w) / max(1, abs(z[k]))
            if rel > worst:
                worst = rel
        if extra:
            converged = True
            break
        if worst < tol:
            extra = True
    return z, converged


def _error_bounds(coeffs, z: list, ctx) -> list:
    n = len(z)
    desc = [c if isinstance(c, (ctx.mpf, ctx.mpc)) else _mpq(ctx, c) for c in reversed(coeffs)]
    lead = desc[0]
    out = []
    for k, zk in enumerate(z):
        prod = lead
        for j, zj in enumerate(z):
            if j != k:
                prod *= zk - zj
        pz = ctx.polyval(desc, zk)
        if prod == 0:
            out.append(float("inf"))
        else:
            out.append(float(n * abs(pz / prod)))
    return out


def _tidy_real(z: list, err: list, ctx) -> list:
    """Snap near-real roots onto the axis and force exact conjugate pairs."""
    z = list(z)
    for k, zk in enumerate(z):
        if abs(zk.imag) <= max(err[k], ctx.mpf(2) ** (-(ctx.prec // 2))):
            z[k] = ctx.mpc(zk.real, 0)
    used = [False] * len(z)
    for k, zk in enumerate(z):
        if used[k] or zk.imag <= 0:
            continue
        best, best_d = None, None
        for j, zj in enumerate(z):
            if j == k or used[j] or zj.imag >= 0:
                continue
            d = abs(zj - ctx.conj(zk))
            if best_d is None or d < best_d:
                best, best_d = j, d
        if best is not None:
            used[k] = used[best] = True
            mid = (zk + ctx.conj(z[best])) / 2
            z[k] = mid
            z[best] = ctx.conj(mid)
    return z


def _sort_key(r: Root):
    return (float(r.value.real), float(r.value.imag))


def solve_univariate(
    p: UniPoly,
    precision: int = DEFAULT_PRECISION,
    max_sweeps: int = MAX_SWEEPS,
) -> RootSet:
    """All complex roots of ``p`` with multiplicities.

    Exact squarefree decomposition separates repeated roots first; each
    squarefree part is solved by Aberth-Ehrlich iteration started on the
    Cauchy-bound circle. Roots closer than ten times their error bounds are
    merged as a final safeguard.

    Raises
    ------
    NoConvergence
        If some part needs more than ``max_sweeps`` sweeps; ``best`` holds
        the unconverged RootSet.
    """
    if not isinstance(p, UniPoly):
        p = UniPoly(p)
    if p.degree < 1:
        raise ValueError("polynomial must have degree at least 1")
    ctx = context(precision)
    cs = list(p.coeffs)
    zeros = 0
    while cs[0] == 0:
        cs.pop(0)
        zeros += 1
    roots = []
    if zeros:
        roots.append(Root(ctx.mpc(0), 0.0, zeros))
    converged = True
    rest = UniPoly(cs, p.var)
    if rest.degree >= 1:
        for factor, mult in rest.squarefree_decomposition():
            coeffs = factor.primitive().coeffs
            z, ok = _aberth(coeffs, ctx, max_sweeps)
            converged = converged and ok
            err = _error_bounds(coeffs, z, ctx)
            z = _tidy_real(z, err, ctx)
            roots.extend(Root(zk, ek, mult) for zk, ek in zip(z, err))
    roots = _merge_clusters(roots, ctx)
    roots.sort(key=_sort_key)
    desc = [_mpq(ctx, c) for c in reversed(p.coeffs)]
    residuals = tuple(float(abs(ctx.polyval(desc, r.value))) for r in roots)
    out = RootSet(tuple(roots), residuals, p.degree, converged)
    if not converged:
        raise NoConvergence(f"Aberth iteration did not converge in {max_sweeps} sweeps", best=out)
    return out


def solve_numeric(
    coeffs,
    precision: int = DEFAULT_PRECISION,
    max_sweeps: int = MAX_SWEEPS,
    real: bool = False,
) -> RootSet:
    """Roots of a polynomial with inexact (mpf/mpc or float) ascending coefficients.

    Without exact arithmetic there is no squarefree split; repeated roots are
    found as clusters and merged. Leading coefficients below ``2**(-precision/2)``
    times the largest one are dropped.
    """
    ctx = context(precision)
    a = [ctx.mpc(c) for c in coeffs]
    big = max((abs(c) for c in a), default=0)
    if big == 0:
        raise ValueError("zero polynomial")
    cut = big * ctx.mpf(2) ** (-(precision // 2))
    while a and abs(a[-1]) <= cut:
        a.pop()
    if len(a) < 2:
        raise ValueError("polynomial must have degree at least 1")
    zeros = 0
    while abs(a[0]) == 0:
        a.pop(0)
        zeros += 1
    roots = [Root(ctx.mpc(0), 0.0, zeros)] if zeros else []
    converged = True
    if len(a) >= 2:
        z, converged = _aberth(a, ctx, max_sweeps)
        err = _error_bounds(a, z, ctx)
        if real:
            z = _tidy_real(z, err, ctx)
        roots.extend(Root(zk, ek, 1) for zk, ek in zip(z, err))
    roots = _merge_clusters(roots, ctx)
    roots.sort(key=_sort_key)
    desc = a[::-1]
    residuals = tuple(float(abs(ctx.polyval(desc, r.value))) for r in roots)
    out = RootSet(tuple(roots), residuals, len(a) - 1 + zeros, converged)
    if not converged:
        raise NoConvergence(f"Aberth iteration did not converge in {max_sweeps} sweeps", best=out)
    return out


def _merge_clusters(roots: list, ctx) -> list:
    out: list = []
    for r in roots:
        for k, o in enumerate(out):
            if abs(r.value - o.value) <= _CLUSTER_FACTOR * max(r.error, o.error) and (
                r.error > 0 or o.error > 0
            ):
                m = o.multiplicity + r.multiplicity
                mid = (o.value * o.multiplicity + r.value * r.multiplicity) / m
                out[k] = Root(mid, max(o.error, r.error), m)
                break
        else:
            out.append(r)
    return out


def real_filter(rs: RootSet, tol: float = 1e-9) -> list:
    """Real parts of the roots whose imaginary part is below ``tol``, one per distinct root."""
    return [r.value.real for r in rs.roots if abs(r.value.imag) < tol]


# ---------------------------------------------------------------------------
# Two-dimensional Newton iteration.


def _parts(f):
    if isinstance(f, RatFunc):
        return f.num, f.den
    if isinstance(f, BiPoly) or (hasattr(f, "diff") and hasattr(f, "magnitude")):
        return f, None
    raise TypeError("system entries must be BiPoly or RatFunc")


def newton_polish_2d(
    system,
    start: CPoint,
    precision: int = DEFAULT_PRECISION,
    max_iter: int = 100,
) -> CPoint:
    """Refine a common zero of two functions of (u, v) by Newton's method.

    Only numerators matter for a zero, so rational entries are replaced by
    their numerators. Converges when both relative residuals (value over the
    sum of absolute term values) fall below ``2**(8 - precision)``.

    Raises
    ------
    SingularJacobian
        If the Jacobian's condition estimate exceeds 1e12.
    Diverged
        If the Newton step grows three sweeps in a row.
    NoConvergence
        If ``max_iter`` iterations pass without convergence.
    """
    ctx = context(precision)
    polys = [_parts(f)[0] for f in system]
    if len(polys) != 2:
        raise ValueError("system must have exactly two equations")
    grads = [(f.diff("u"), f.diff("v")) for f in polys]
    u, v = to_mpc(ctx, start.first), to_mpc(ctx, start.second)
    target = ctx.mpf(2) ** (8 - precision)
    prev = None
    growth = 0

    def evaluate(u, v):
        vals, mags = [], []
        for f in polys:
            vals.append(f(u, v))
            mags.append(f.magnitude(u, v))
        return vals, mags

    for _ in range(max_iter):
        vals, mags = evaluate(u, v)
        if all(abs(val) <= target * max(m, 1e-300) for val, m in zip(vals, mags)):
            return CPoint(u, v, start.plane)
        j = [[g[0](u, v), g[1](u, v)] for g in grads]
        det = j[0][0] * j[1][1] - j[0][1] * j[1][0]
        norm = max(abs(j[0][0]) + abs(j[0][1]), abs(j[1][0]) + abs(j[1][1]))
        if det == 0:
            raise SingularJacobian("Jacobian is singular")
        inv_norm = max(abs(j[1][1]) + abs(j[0][1]), abs(j[1][0]) + abs(j[0][0])) / abs(det)
        if norm * inv_norm > _CONDITION_LIMIT:
            raise SingularJacobian(f"Jacobian condition estimate {float(norm * inv_norm):.3g}")
        du = (j[1][1] * vals[0] - j[0][1] * vals[1]) / det
        dv = (-j[1][0] * vals[0] + j[0][0] * vals[1]) / det
        u, v = u - du, v - dv
        size = max(abs(du), abs(dv))
        if prev is not None and size > prev:
            growth += 1
            if growth >= 3:
                raise Diverged("Newton steps grew three sweeps in a row")
        else:
            growth = 0
        prev = size
        if size <= target * (1 + max(abs(u), abs(v))):
            vals, mags = evaluate(u, v)
            return CPoint(u, v, start.plane)
    raise NoConvergence("Newton iteration did not converge", best=CPoint(u, v, start.plane))
