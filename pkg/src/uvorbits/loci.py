"""Distinguished points on the period curves.

Central critical points, their full cycles, neutral (bifurcation) points at
prescribed multipliers, pointwise classification and the real Mandelbrot
segment on the critical parabola ``v = u**2 + u``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from ._mp import DEFAULT_PRECISION, context
from .bipoly import U, BiPoly, eval_complex, resultant, specialize
from .dynamics import (
    CPoint,
    Plane,
    derive_period_curve,
    eigenvalue_numeric,
    eigenvalue_symbolic,
)
from .errors import Diverged, NoConvergence, SingularJacobian
from .roots import newton_polish_2d, solve_numeric, solve_univariate
from .unipoly import UniPoly

__all__ = [
    "ClassifiedPoint",
    "MandelbrotPoint",
    "classify_multiplier",
    "classify",
    "central_critical_points",
    "critical_cycles",
    "neutral_points",
    "intersect_curves",
    "mandelbrot_real",
    "mandelbrot_segment",
    "to_csv",
    "CLASSES",
    "SOURCES",
]

CLASSES = ("attracting", "super_attracting", "repulsive", "neutral")
SOURCES = ("central_critical", "cycle_iterate", "neutral_solver", "user")

NEUTRAL_BAND = 1e-9
CRITICAL_BAND = 1e-9
# Acceptance of a lifted intersection point, relative to the term magnitudes.
_LIFT_TOL = 1e-6
_FINAL_TOL = 1e-10
_MERGE_TOL = 1e-8

PARABOLA = U**2 + U


@dataclass(frozen=True)
class ClassifiedPoint:
    point: CPoint
    period: int
    eigenvalue: object
    classification: str
    source: str
    multiplicity: int = 1

    def to_json(self) -> dict:
        u, v, lam = complex(self.point.first), complex(self.point.second), complex(self.eigenvalue)
        return {
            "period": self.period,
            "u": [u.real, u.imag],
            "v": [v.real, v.imag],
            "lambda": [lam.real, lam.imag],
            "class": self.classification,
            "source": self.source,
            "multiplicity": self.multiplicity,
        }

    def csv_row(self) -> list:
        u, v, lam = complex(self.point.first), complex(self.point.second), complex(self.eigenvalue)
        return [
            self.period,
            repr(u.real), repr(u.imag),
            repr(v.real), repr(v.imag),
            repr(lam.real), repr(lam.imag),
            self.classification,
            self.source,
            self.multiplicity,
        ]


CSV_HEADER = ["period", "re_u", "im_u", "re_v", "im_v", "re_lambda", "im_lambda", "class", "source", "multiplicity"]


def to_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow(p.csv_row())
    return buf.getvalue()


def classify_multiplier(lam) -> str:
    """Stability class from the multiplier modulus."""
    m = abs(lam)
    if m < CRITICAL_BAND:
        return "super_attracting"
    if abs(1 - m) < NEUTRAL_BAND:
        return "neutral"
    return "attracting" if m < 1 else "repulsive"


def classify(p: CPoint, n: int, precision: int = DEFAULT_PRECISION, source: str = "user") -> ClassifiedPoint:
    """Classify an n-periodic UV point by its multiplier; raises ``NotPeriodic`` otherwise."""
    lam = eigenvalue_numeric(p, n, precision)
    return ClassifiedPoint(p, n, lam, classify_multiplier(lam), source)


# ---------------------------------------------------------------------------
# Critical cycles.


def central_critical_points(n: int, precision: int = DEFAULT_PRECISION) -> list:
    """Period-n points on the critical parabola, one per critical cycle.

    Roots of ``C_n(u, u**2 + u)``; the singular root ``u = 0`` is dropped.
    """
    curve = derive_period_curve(n).poly
    uni = specialize(curve, PARABOLA, var="v")
    out = []
    for root in solve_univariate(uni, precision).roots:
        u = root.value
        if abs(u) == 0:
            continue
        p = CPoint(u, u * u + u, Plane.UV)
        lam = eigenvalue_numeric(p, n, precision)
        out.append(
            ClassifiedPoint(p, n, lam, classify_multiplier(lam), "central_critical", root.multiplicity)
        )
    return out


def _polish_system(n: int):
    curve = derive_period_curve(n).poly
    return (curve, eigenvalue_symbolic(n).num)


def critical_cycles(n: int, precision: int = DEFAULT_PRECISION, polish: bool = True) -> list:
    """Every critical n-cycle, each as a list of n classified points starting on the parabola.

    Iterates of G are refined by Newton's method on the curve equation together
    with the multiplier numerator, a system that is regular at critical points.
    """
    system = _polish_system(n) if polish else None
    cycles = []
    for centre in central_critical_points(n, precision):
        pts = [centre]
        u, v = centre.point.first, centre.point.second
        for _ in range(n - 1):
            g = v + v / u - 1
            u, v = g, g * (1 + v - u)
            p = CPoint(u, v, Plane.UV)
            if system is not None:
                try:
                    p = newton_polish_2d(system, p, precision)
                except (SingularJacobian, Diverged, NoConvergence):
                    pass
            u, v = p.first, p.second
            lam = eigenvalue_numeric(p, n, precision)
            pts.append(ClassifiedPoint(p, n, lam, classify_multiplier(lam), "cycle_iterate"))
        cycles.append(pts)
    return cycles


# ---------------------------------------------------------------------------
# Intersections and neutral points.


class _Combination:
    """``N - t*D`` for exact N, D and an arbitrary complex t, evaluable like a BiPoly."""

    def __init__(self, num: BiPoly, den: BiPoly, t):
        self.num, self.den, self.t = num, den, t

    def __call__(self, u, v):
        return self.num(u, v) - self.t * self.den(u, v)

    def diff(self, var):
        return _Combination(self.num.diff(var), self.den.diff(var), self.t)

    def magnitude(self, u, v):
        return self.num.magnitude(u, v) + abs(self.t) * self.den.magnitude(u, v)

    def v_coefficients(self, u):
        a = _v_coefficients(self.num, u)
        b = _v_coefficients(self.den, u)
        n = max(len(a), len(b))
        a += [0] * (n - len(a))
        b += [0] * (n - len(b))
        return [x - self.t * y for x, y in zip(a, b)]

    @property
    def degree_v(self):
        return max(self.num.degree_v, self.den.degree_v)


def _v_coefficients(f, u) -> list:
    if isinstance(f, _Combination):
        return f.v_coefficients(u)
    out = [0] * (max(f.degree_v, 0) + 1)
    for (i, j), c in f.terms.items():
        out[j] += c * u**i
    return out


def _residual(f, u, v) -> float:
    return float(abs(f(u, v)) / max(f.magnitude(u, v), 1e-300))


def _drop_dust(p: CPoint, precision: int) -> CPoint:
    # Polishing a real point in complex arithmetic can leave tiny imaginary parts.
    eps = 2.0 ** (-precision // 2)
    u, v = p.first, p.second
    if abs(u.imag) <= eps * (1 + abs(u)) and abs(v.imag) <= eps * (1 + abs(v)):
        ctx = context(precision)
        return CPoint(ctx.mpc(u.real), ctx.mpc(v.real), Plane.UV)
    return p


def _lift(f, g, u_roots, precision):
    """Back-substitute each u-root into f (or g when f is free of v) and keep common zeros."""
    ctx = context(precision)
    out = []
    for root in u_roots:
        u0 = root.value
        if abs(u0) < 1e-12:
            continue
        primary, other = (f, g) if f.degree_v >= 1 else (g, f)
        coeffs = [ctx.mpc(c) for c in _v_coefficients(primary, u0)]
        if all(abs(c) == 0 for c in coeffs[1:]) or len(coeffs) < 2:
            primary, other = other, primary
            coeffs = [ctx.mpc(c) for c in _v_coefficients(primary, u0)]
        if len(coeffs) < 2:
            continue
        real = all(c.imag == 0 for c in coeffs)
        try:
            vs = solve_numeric(coeffs, precision, real=real)
        except ValueError:
            continue
        picked = []
        for vr in vs.roots:
            v0 = vr.value
            if _residual(other, u0, v0) <= _LIFT_TOL:
                picked.append(v0)
        for v0 in picked:
            p = CPoint(u0, v0, Plane.UV)
            try:
                p = newton_polish_2d((f, g), p, precision)
            except (SingularJacobian, Diverged, NoConvergence):
                pass
            if real and v0.imag == 0:
                p = _drop_dust(p, precision)
            share = max(root.multiplicity // len(picked), 1)
            out.append((p, share))
    return out


def intersect_curves(f: BiPoly, g: BiPoly, precision: int = DEFAULT_PRECISION) -> list:
    """Common zeros of two exact polynomials as ``(CPoint, multiplicity)`` pairs.

    Eliminates v by a resultant, solves for u, back-substitutes and polishes;
    points with ``u = 0`` are excluded.
    """
    res = resultant(f, g, "v")
    if res.degree < 1:
        return []
    roots = solve_univariate(res, precision).roots
    return _accept(_lift(f, g, roots, precision), f, g)


def _accept(cands, f, g):
    """Keep verified common zeros; coincident candidates merge with summed multiplicity."""
    out = []
    for p, m in cands:
        if _residual(f, p.first, p.second) > _FINAL_TOL or _residual(g, p.first, p.second) > _FINAL_TOL:
            continue
        for k, (q, mq) in enumerate(out):
            if p.distance(q) <= _MERGE_TOL * (1 + q.norm()):
                out[k] = (q, mq + m)
                break
        else:
            out.append((p, m))
    return out


def _resultant_in_s(curve: BiPoly, num: BiPoly, den: BiPoly) -> list:
    """Coefficients A_k(u) of ``Res_v(curve, num - s*den) = sum_k s**k A_k(u)``."""
    k = max(curve.degree_v, 0)
    samples = list(range(k + 1))
    values = [resultant(curve, num - den * s, "v") for s in samples]
    # Lagrange interpolation in s with exact rational arithmetic.
    coeffs = [UniPoly((), "u") for _ in range(k + 1)]
    for i, si in enumerate(samples):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, sj in enumerate(samples):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= sj * basis[d + 1]
            denom *= si - sj
        for d, b in enumerate(basis):
            if b:
                coeffs[d] = coeffs[d] + values[i] * (b / denom)
    return coeffs


def neutral_points(n: int, targets=(1, -1), precision: int = DEFAULT_PRECISION) -> list:
    """Points of C_n where the multiplier equals each target (|target| = 1).

    Solves ``C_n = 0`` with ``num(lambda_n) - t * den(lambda_n) = 0`` by
    eliminating v. Rational targets stay exact; other unit-modulus targets
    go through an exact interpolation of the resultant in t followed by
    numeric evaluation. Repeated roots keep their multiplicity, so
    intersections with lower-period curves appear once with their order.
    """
    ctx = context(precision)
    curve = derive_period_curve(n).poly
    lam = eigenvalue_symbolic(n)
    out = []
    interp = None
    for t in targets:
        if abs(abs(complex(t)) - 1) > 1e-12:
            raise ValueError(f"target {t} does not have modulus 1")
        if isinstance(t, (int, Fraction)):
            g = lam.num - lam.den * t
            res = resultant(curve, g, "v")
            if res.degree < 1:
                continue
            roots = solve_univariate(res, precision).roots
            pts = _accept(_lift(curve, g, roots, precision), curve, g)
        else:
            if interp is None:
                interp = _resultant_in_s(curve, lam.num, lam.den)
            tc = ctx.mpc(complex(t))
            deg = max(p.degree for p in interp) + 1
            coeffs = [ctx.mpc(0)] * max(deg, 1)
            for k, a in enumerate(interp):
                for d, c in enumerate(a.coeffs):
                    coeffs[d] += tc**k * (ctx.mpf(Fraction(c).numerator) / Fraction(c).denominator)
            g = _Combination(lam.num, lam.den, tc)
            roots = solve_numeric(coeffs, precision).roots
            pts = _accept(_lift(curve, g, roots, precision), curve, g)
        for p, m in pts:
            value = eval_complex(lam, p, precision)
            out.append(ClassifiedPoint(p, n, value, classify_multiplier(value), "neutral_solver", m))
    return out


# ---------------------------------------------------------------------------
# Real Mandelbrot segment.


@dataclass(frozen=True)
class MandelbrotPoint:
    u: Fraction
    inside: bool
    v: Fraction | None = None


MANDELBROT_RANGE = (Fraction(-2), Fraction(1, 4))


def mandelbrot_real(u) -> MandelbrotPoint:
    """Membership of the parabola point above ``u`` in the real Mandelbrot set of G.

    Inside exactly for ``-2 <= u <= 1/4``; then ``v = u**2 + u`` is returned as
    an exact rational.
    """
    u = Fraction(u)
    lo, hi = MANDELBROT_RANGE
    if lo <= u <= hi:
        return MandelbrotPoint(u, True, Fraction(PARABOLA(u, 0)))
    return MandelbrotPoint(u, False)


def mandelbrot_segment() -> dict:
    """Endpoints and vertex of the real Mandelbrot arc of ``v = u**2 + u``, exactly."""
    lo, hi = MANDELBROT_RANGE
    slope = PARABOLA.diff("u")  # 2u + 1
    a, b = slope.terms.get((1, 0), 0), slope.terms.get((0, 0), 0)
    uv = Fraction(-b, a)
    return {
        "start": (lo, Fraction(PARABOLA(lo, 0))),
        "end": (hi, Fraction(PARABOLA(hi, 0))),
        "vertex": (uv, Fraction(PARABOLA(uv, 0))),
    }
