"""The quadratic family in (x, y) and (u, v) coordinates.

With ``c = y - x**2`` the pair ``(x, y) = (x_k, x_{k+1})`` of consecutive
iterates of ``x -> x**2 + c`` moves under

    F(x, y) = (y, y**2 + y - x**2).

The substitution ``u = x + y``, ``v = x + y**2 + y - x**2`` conjugates F to

    G(u, v) = (g, g * (1 + v - u)),   g = v + v/u - 1,

whose n-th iterate is written ``(R_n, Q_n)`` with ``Q_n = R_n * T_n``. The
recursion used throughout is

    R_{n+1} = T_n * (R_n + 1) - 1,   T_{n+1} = 1 + R_n * (T_n - 1),

started from ``R_0 = u`` and ``T_0 = v/u``.
"""

from __future__ import annotations

import cmath
import random
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ._mp import DEFAULT_PRECISION, context, to_mpc
from .bipoly import U, V, BiPoly, RatFunc, exact_divide, gcd_bivariate, specialize
from .errors import (
    DepthExceeded,
    NotPeriodic,
    PlaneMismatch,
    SingularPoint,
    ValidationFailed,
)

__all__ = [
    "Plane",
    "CPoint",
    "SymbolicIterate",
    "CurveEq",
    "ValidationRecord",
    "step",
    "orbit",
    "transform",
    "c_value",
    "c_value_ratfunc",
    "symbolic_iterate",
    "derive_period_curve",
    "eigenvalue_symbolic",
    "eigenvalue_numeric",
    "eigenvalue_xy",
    "period3_xy_roots",
    "xn_sum_formula",
    "minimal_period",
    "DEFAULT_MAX_PERIOD",
]

DEFAULT_MAX_PERIOD = 6

# Closure tolerance for "p is n-periodic" checks, relative to 1 + |p|.
PERIODIC_TOL = 1e-8
# Distance below which a proper divisor counts as a return.
DIVISOR_TOL = 1e-6


class Plane(str, Enum):
    XY = "XY"
    UV = "UV"


@dataclass(frozen=True)
class CPoint:
    """A point of the (x, y) or (u, v) plane with complex coordinates.

    Coordinates may be Python complex numbers or mpmath ``mpc`` values; the
    plane tag decides how they are read.
    """

    first: object
    second: object
    plane: Plane = Plane.UV

    def __post_init__(self):
        if not isinstance(self.plane, Plane):
            object.__setattr__(self, "plane", Plane(str(self.plane).upper()))

    @property
    def singular(self) -> bool:
        return self.plane is Plane.UV and self.first == 0

    def _check(self, other: "CPoint"):
        if not isinstance(other, CPoint):
            raise TypeError("expected a CPoint")
        if other.plane is not self.plane:
            raise PlaneMismatch(f"cannot combine {self.plane.value} and {other.plane.value} points")

    def __sub__(self, other: "CPoint") -> "CPoint":
        self._check(other)
        return CPoint(self.first - other.first, self.second - other.second, self.plane)

    def __add__(self, other: "CPoint") -> "CPoint":
        self._check(other)
        return CPoint(self.first + other.first, self.second + other.second, self.plane)

    def distance(self, other: "CPoint") -> float:
        """Max-norm distance between two points of the same plane."""
        d = self - other
        return float(max(abs(d.first), abs(d.second)))

    def norm(self) -> float:
        return float(max(abs(self.first), abs(self.second)))

    def to_complex(self) -> "CPoint":
        return CPoint(complex(self.first), complex(self.second), self.plane)

    def as_tuple(self) -> tuple:
        return (self.first, self.second)


def _uv(u, v) -> CPoint:
    return CPoint(u, v, Plane.UV)


# ---------------------------------------------------------------------------
# Maps and coordinate changes.


def step(p: CPoint) -> CPoint:
    """Apply G (UV plane) or F (XY plane) once."""
    a, b = p.first, p.second
    if p.plane is Plane.XY:
        return CPoint(b, b * b + b - a * a, Plane.XY)
    if a == 0:
        raise SingularPoint("G is undefined at u = 0")
    g = b + b / a - 1
    return CPoint(g, g * (1 + b - a), Plane.UV)


def orbit(p: CPoint, n: int) -> list:
    """``[p, step(p), ..., step^n(p)]``."""
    out = [p]
    for _ in range(n):
        out.append(step(out[-1]))
    return out


def transform(p: CPoint, to) -> CPoint:
    """Change coordinates between the XY and UV planes."""
    to = to if isinstance(to, Plane) else Plane(str(to).upper())
    if p.plane is to:
        return p
    a, b = p.first, p.second
    if to is Plane.UV:
        return CPoint(a + b, a + b * b + b - a * a, Plane.UV)
    if a == 0:
        raise SingularPoint("u = 0 has no (x, y) preimage")
    x = (a * a + a - b) / (2 * a)
    y = (a * a - a + b) / (2 * a)
    return CPoint(x, y, Plane.XY)


def c_value(p: CPoint):
    """The parameter c of the quadratic whose orbit ``p`` belongs to."""
    a, b = p.first, p.second
    if p.plane is Plane.XY:
        return b - a * a
    if a == 0:
        raise SingularPoint("c is undefined at u = 0")
    return (-(a**4) + a * a * (2 * b - 3) - b * b + 4 * a * b) / (4 * a * a)


def c_value_ratfunc() -> RatFunc:
    """c as an exact rational function of (u, v)."""
    return RatFunc(-(U**4) + U**2 * (2 * V - 3) - V**2 + 4 * U * V, 4 * U**2)


# ---------------------------------------------------------------------------
# Symbolic iterates.


@dataclass(frozen=True)
class SymbolicIterate:
    n: int
    R: RatFunc
    Q: RatFunc
    T: RatFunc


class _IterateCache:
    """Memo of (R_k, T_k); concurrent reads, serialized inserts."""

    def __init__(self):
        self._lock = threading.Lock()
        self._items = [(RatFunc(U), RatFunc(V, U))]

    def get(self, n: int) -> tuple:
        items = self._items
        if n < len(items):
            return items[n]
        with self._lock:
            items = list(self._items)
            while len(items) <= n:
                r, t = items[-1]
                items.append((t * (r + 1) - 1, 1 + r * (t - 1)))
            self._items = items
            return items[n]


_ITERATES = _IterateCache()


def _check_depth(n: int, max_n):
    limit = DEFAULT_MAX_PERIOD if max_n is None else max_n
    if not isinstance(n, int) or n < 0:
        raise ValueError("n must be a nonnegative integer")
    if n > limit:
        raise DepthExceeded(f"n = {n} exceeds the configured maximum {limit}")


def symbolic_iterate(n: int, max_n: int | None = None) -> SymbolicIterate:
    """Exact ``(R_n, Q_n, T_n)`` for the n-th iterate of G (``n = 0`` is the identity)."""
    _check_depth(n, max_n)
    r, t = _ITERATES.get(n)
    return SymbolicIterate(n, r, r * t, t)


def eigenvalue_symbolic(n: int, max_n: int | None = None) -> RatFunc:
    """Cycle multiplier ``lambda_n = u * (R_u T_v - R_v T_u)`` as a reduced rational function."""
    if n < 1:
        raise ValueError("n must be positive")
    it = symbolic_iterate(n, max_n)
    r, t = it.R, it.T
    return U * (r.diff("u") * t.diff("v") - r.diff("v") * t.diff("u"))


# ---------------------------------------------------------------------------
# Period curves.


@dataclass(frozen=True)
class ValidationRecord:
    seed: int
    v_samples: tuple
    points: tuple
    closure: tuple
    divisor_distance: tuple


@dataclass(frozen=True)
class CurveEq:
    period: int
    poly: BiPoly
    removed_factors: tuple = ()
    validation: ValidationRecord | None = None

    def to_json(self) -> dict:
        out = self.poly.to_json()
        out["period"] = self.period
        out["removed"] = [
            {"label": label, "multiplicity": m, "poly": f.to_json()}
            for f, m, label in self.removed_factors
        ]
        return out


def _proper_divisors(n: int) -> list:
    return [d for d in range(1, n) if n % d == 0]


def _strip_monomials(p: BiPoly) -> BiPoly:
    return exact_divide(p, BiPoly.monomial(p.ord_u, p.ord_v))


_CURVES: dict = {}
_CURVE_LOCK = threading.Lock()


def derive_period_curve(
    n: int,
    max_n: int | None = None,
    validate: bool = True,
    seed: int = 20240601,
    samples: int = 8,
) -> CurveEq:
    """Derive the period-n orbit curve ``C_n`` exactly.

    The numerator of ``R_0 R_1 ... R_{n-1} - 1`` is intersected (by gcd) with
    the numerators of ``R_n - u`` and ``Q_n - v``; curves of proper divisor
    periods are divided out, and the quotient is checked numerically on
    ``samples`` points of its zero set.

    For ``n = 1`` the product factor is ``u - 1``, which carries no period-1
    points, so the gcd starts from the fixed-point numerators alone.
    """
    _check_depth(n, max_n)
    if n < 1:
        raise ValueError("n must be positive")
    key = (n, validate, seed, samples)
    hit = _CURVES.get(key)
    if hit is not None:
        return hit

    it = symbolic_iterate(n, max_n)
    fr = _strip_monomials((it.R - U).num)
    fq = _strip_monomials((it.Q - V).num)
    prod_num = None
    if n == 1:
        g = gcd_bivariate(fr, fq)
    else:
        prod = RatFunc(1)
        for k in range(n):
            prod = prod * symbolic_iterate(k, max_n).R
        prod_num = _strip_monomials((prod - 1).num)
        g = gcd_bivariate(prod_num, fr)
        g = gcd_bivariate(g, fq)

    removed = []
    core = g
    for d in _proper_divisors(n):
        cd = derive_period_curve(d, max_n, validate=False).poly
        m = 0
        while True:
            q = exact_divide(core, cd)
            if q is None:
                break
            core, m = q, m + 1
        if m:
            removed.append((cd, m, "lower-period"))
    core = core.canonical()
    if prod_num is not None:
        rest = exact_divide(prod_num, g)
        if rest is not None and not rest.is_constant():
            removed.append((rest.canonical(), 1, "spurious"))

    record = _validate_curve(core, n, seed, samples) if validate else None
    curve = CurveEq(n, core, tuple(removed), record)
    with _CURVE_LOCK:
        _CURVES[key] = curve
    return curve


def _g_mp(u, v):
    g = v + v / u - 1
    return g, g * (1 + v - u)


def _validate_curve(poly: BiPoly, n: int, seed: int, samples: int) -> ValidationRecord:
    from .roots import solve_univariate

    ctx = context(DEFAULT_PRECISION)
    rng = random.Random(seed)
    v_used, pts, closure, dist = [], [], [], []
    attempts = 0
    while len(pts) < samples:
        attempts += 1
        if attempts > 20 * samples:
            raise ValidationFailed(f"could not draw {samples} regular samples on C_{n}")
        v0 = Fraction(rng.randint(-300, 300), 100)
        if poly.degree_u < 1:
            raise ValidationFailed(f"C_{n} does not depend on u")
        uni = specialize(poly, v0, var="v")
        if uni.degree < 1:
            continue
        for root in solve_univariate(uni).values():
            if len(pts) >= samples:
                break
            u0 = ctx.mpc(root)
            if abs(u0) < 1e-6:
                continue
            v0c = ctx.mpc(ctx.mpf(v0.numerator) / v0.denominator)
            traj = [(u0, v0c)]
            ok = True
            for _ in range(n):
                a, b = traj[-1]
                if abs(a) < 1e-6:
                    ok = False
                    break
                traj.append(_g_mp(a, b))
            if not ok:
                continue
            scale = 1 + max(abs(u0), abs(v0c))
            res = max(abs(traj[n][0] - u0), abs(traj[n][1] - v0c)) / scale
            ddist = min(
                (max(abs(traj[d][0] - u0), abs(traj[d][1] - v0c)) for d in _proper_divisors(n)),
                default=float("inf"),
            )
            v_used.append(v0)
            pts.append((complex(u0), complex(v0c)))
            closure.append(float(res))
            dist.append(float(ddist))
            if res > PERIODIC_TOL or ddist <= DIVISOR_TOL:
                raise ValidationFailed(
                    f"sample ({complex(u0)}, {float(v0)}) on C_{n} has closure {float(res):.3g}"
                    f" and divisor distance {float(ddist):.3g}"
                )
    return ValidationRecord(seed, tuple(v_used), tuple(pts), tuple(closure), tuple(dist))


# ---------------------------------------------------------------------------
# Numeric eigenvalues.


def _to_mp_point(p: CPoint, ctx):
    return to_mpc(ctx, p.first), to_mpc(ctx, p.second)


def _close(a, b, tol=PERIODIC_TOL) -> bool:
    scale = 1 + max(abs(b[0]), abs(b[1]))
    return max(abs(a[0] - b[0]), abs(a[1] - b[1])) <= tol * scale


def minimal_period(p: CPoint, n: int, tol: float = DIVISOR_TOL) -> int:
    """Smallest ``d | n`` with ``G^d(p)`` within ``tol`` of ``p`` (``n`` when none is)."""
    pts = orbit(p, n)
    for d in _proper_divisors(n):
        if pts[d].distance(p) <= tol * (1 + p.norm()):
            return d
    return n


def eigenvalue_numeric(p: CPoint, n: int, precision: int = DEFAULT_PRECISION):
    """Multiplier of the n-cycle through a UV point via the chained Jacobian of G.

    Raises :class:`NotPeriodic` unless ``G^n(p)`` is within 1e-8 of ``p``.
    """
    if p.plane is not Plane.UV:
        raise PlaneMismatch("eigenvalue_numeric expects a UV point")
    ctx = context(precision)
    u, v = _to_mp_point(p, ctx)
    start = (u, v)
    m = [[ctx.mpc(1), ctx.mpc(0)], [ctx.mpc(0), ctx.mpc(1)]]
    for _ in range(n):
        if u == 0:
            raise SingularPoint("orbit reaches u = 0")
        g = v + v / u - 1
        t = 1 + v - u
        gu = -v / (u * u)
        gv = 1 + 1 / u
        j = [[gu, gv], [gu * t - g, gv * t + g]]
        m = [
            [j[0][0] * m[0][0] + j[0][1] * m[1][0], j[0][0] * m[0][1] + j[0][1] * m[1][1]],
            [j[1][0] * m[0][0] + j[1][1] * m[1][0], j[1][0] * m[0][1] + j[1][1] * m[1][1]],
        ]
        u, v = g, g * t
    if not _close((u, v), start):
        raise NotPeriodic(f"point does not return after {n} steps")
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def eigenvalue_xy(p: CPoint, n: int, precision: int = DEFAULT_PRECISION):
    """Multiplier ``dP_n/dx + 2x dP_n/dy`` of the n-cycle through an XY point."""
    if p.plane is not Plane.XY:
        raise PlaneMismatch("eigenvalue_xy expects an XY point")
    ctx = context(precision)
    x, y = _to_mp_point(p, ctx)
    c = y - x * x
    pk, dx, dy = x, ctx.mpc(1), ctx.mpc(0)
    for _ in range(n):
        dx = 2 * pk * dx - 2 * x
        dy = 2 * pk * dy + 1
        pk = pk * pk + c
    if not _close((pk, pk * pk + c), (x, y)):
        raise NotPeriodic(f"point does not return after {n} steps")
    return dx + 2 * x * dy


# ---------------------------------------------------------------------------
# Closed forms on the XY plane.


def period3_xy_roots(x) -> tuple:
    """The three y with (x, y) on the period-3 curve, by Cardano's formulas.

    The curve pulled back to the XY plane is the cubic
    ``y^3 + (x+2) y^2 + (1 + 2x - x^2) y + (1 + x - x^3) = 0``.
    """
    x = complex(x)
    shift = -2 / 3 - x / 3
    a = 8 / 27 * x**3 - 2 / 9 * x**2 - x / 9 - 25 / 54
    b = -4 / 27 * x**4 - 4 / 27 * x**3 + 5 / 27 * x**2 + x / 9 + 23 / 108
    st = (4 * x * x - 2 * x + 1) / 9
    root = cmath.sqrt(b)
    base = a + root if abs(a + root) >= abs(a - root) else a - root
    s = base ** (1 / 3) if base != 0 else 0j
    t = st / s if s != 0 else 0j
    w = complex(-0.5, 3**0.5 / 2)
    return (
        shift + s + t,
        shift + w * s + t / w,
        shift + s / w + w * t,
    )


def xn_sum_formula(x0, x1, n: int):
    """``x_n`` from the first two iterates via the telescoping product sum.

    ``x_n = x_1 + (x_1 - x_0) * sum_{k=1}^{n-1} prod_{i=1}^{k} (x_0 + x_{n-i})``;
    the intermediate iterates are generated with ``c = x_1 - x_0**2``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    c = x1 - x0 * x0
    xs = [x0, x1]
    while len(xs) < n:
        xs.append(xs[-1] * xs[-1] + c)
    total = 0
    prod = 1
    for i in range(1, n):
        prod = prod * (x0 + xs[n - i])
        total = total + prod
    return x1 + (x1 - x0) * total
