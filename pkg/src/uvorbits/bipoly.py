"""Exact sparse polynomials and rational functions in (u, v).

Coefficients are Python ints or :class:`fractions.Fraction`; nothing is ever
rounded. Monomials are ordered graded-lexicographically with ``u > v``: a
term ``u^i v^j`` is compared by ``(i + j, i)``. That order fixes the leading
term, the canonical sign, and the order of terms in the JSON interchange
format::

    {"vars": ["u", "v"], "terms": [{"c": "3/2", "u": 1, "v": 0}, ...]}

Typical use::

    >>> from uvorbits.bipoly import U, V, gcd_bivariate
    >>> gcd_bivariate((U + 1) * (U * V + V + 1), (U + 1) * (U - V))
    BiPoly('u + 1')
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from numbers import Rational

from . import _dense
from ._mp import DEFAULT_PRECISION, context, to_mpc
from .errors import DivisionByZeroPoly, PoleError
from .unipoly import UniPoly, _q

__all__ = [
    "BiPoly",
    "RatFunc",
    "U",
    "V",
    "arith",
    "derivative",
    "gcd_bivariate",
    "exact_divide",
    "resultant",
    "specialize",
    "eval_complex",
    "parse",
]

_VARS = ("u", "v")

# Denominators smaller than this fraction of (1 + |numerator|) count as poles.
POLE_TOLERANCE = 1e-12


def _grlex(key):
    i, j = key
    return (i + j, i)


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, Rational) and not isinstance(x, bool))


class BiPoly:
    """Immutable sparse polynomial in u and v over Q.

    ``terms`` maps exponent pairs ``(i, j)`` to nonzero coefficients of
    ``u^i v^j``.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for (i, j), c in items:
                c = _q(c)
                if i < 0 or j < 0:
                    raise ValueError("exponents must be nonnegative")
                key = (int(i), int(j))
                c = t.get(key, 0) + c
                if c:
                    t[key] = c
                else:
                    t.pop(key, None)
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "BiPoly":
        obj = cls.__new__(cls)
        obj._t = t
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "BiPoly":
        c = _q(c)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "BiPoly":
        c = _q(c)
        return cls._raw({(i, j): c} if c else {})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order."""
        return sorted(self._t.items(), key=lambda kv: _grlex(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and (0, 0) in self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    @property
    def degree_u(self) -> int:
        return max((i for i, _ in self._t), default=-1)

    @property
    def degree_v(self) -> int:
        return max((j for _, j in self._t), default=-1)

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self._t), default=-1)

    def degree(self, var: str) -> int:
        return self.degree_u if var == "u" else self.degree_v

    @property
    def ord_u(self) -> int:
        return min((i for i, _ in self._t), default=0)

    @property
    def ord_v(self) -> int:
        return min((j for _, j in self._t), default=0)

    def leading_term(self):
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        key = max(self._t, key=_grlex)
        return key, self._t[key]

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._t.get((0, 0), 0)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _lift(other):
        if isinstance(other, BiPoly):
            return other
        if _is_scalar(other):
            return BiPoly.constant(other)
        return None

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) + other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t = dict(self._t)
        for k, c in o._t.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return BiPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) - other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self) * other
        if _is_scalar(other):
            c = _q(other)
            if not c:
                return BiPoly._raw({})
            return BiPoly._raw({k: v * c for k, v in self._t.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        t: dict = {}
        get = t.get
        for (i1, j1), c1 in self._t.items():
            for (i2, j2), c2 in other._t.items():
                k = (i1 + i2, j1 + j2)
                t[k] = get(k, 0) + c1 * c2
        return BiPoly._raw({k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = BiPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            c = _q(other)
            if c == 0:
                raise DivisionByZeroPoly("division by zero")
            inv = Fraction(1) / c
            return self * inv
        if isinstance(other, (BiPoly, RatFunc)):
            return RatFunc(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return RatFunc(BiPoly.constant(other), self)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self._t == other._t
        if isinstance(other, RatFunc):
            return other == self
        if _is_scalar(other):
            return self._t == BiPoly.constant(other)._t
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __bool__(self):
        return bool(self._t)

    # -- calculus and substitution ---------------------------------------

    def diff(self, var: str) -> "BiPoly":
        if var not in _VARS:
            raise ValueError(f"unknown variable {var!r}")
        t = {}
        for (i, j), c in self._t.items():
            if var == "u" and i:
                t[(i - 1, j)] = c * i
            elif var == "v" and j:
                t[(i, j - 1)] = c * j
        return BiPoly._raw(t)

    def __call__(self, u, v):
        """Evaluate at any values supporting ring arithmetic (ints, Fractions, complex, mpc)."""
        if not self._t:
            return 0
        du, dv = self.degree_u, self.degree_v
        pu = [1] * (du + 1)
        for i in range(1, du + 1):
            pu[i] = pu[i - 1] * u
        pv = [1] * (dv + 1)
        for j in range(1, dv + 1):
            pv[j] = pv[j - 1] * v
        acc = 0
        for (i, j), c in self._t.items():
            acc = acc + c * pu[i] * pv[j]
        return acc

    def magnitude(self, u, v):
        """Sum of absolute term values at (u, v); the scale used for relative residuals."""
        acc = 0
        au, av = abs(u), abs(v)
        for (i, j), c in self._t.items():
            acc = acc + abs(c) * au**i * av**j
        return acc

    def compose(self, u_expr, v_expr):
        """Substitute polynomials (or rational functions) for u and v."""
        du, dv = self.degree_u, self.degree_v
        pu = [BiPoly.constant(1)]
        for _ in range(du):
            pu.append(pu[-1] * u_expr)
        pv = [BiPoly.constant(1)]
        for _ in range(dv):
            pv.append(pv[-1] * v_expr)
        acc = BiPoly.constant(0)
        for (i, j), c in self._t.items():
            acc = acc + pu[i] * pv[j] * c
        return acc

    def swap(self) -> "BiPoly":
        return BiPoly._raw({(j, i): c for (i, j), c in self._t.items()})

    # -- normal forms -----------------------------------------------------

    def integer_content(self):
        """Return ``(scalar, primitive)`` with ``self == scalar * primitive``.

        ``primitive`` has integer coefficients of content 1 and a positive
        leading coefficient in graded-lex order.
        """
        if not self._t:
            return Fraction(0), self
        den = 1
        for c in self._t.values():
            if isinstance(c, Fraction):
                d = c.denominator
                den = den * d // _gcd(den, d)
        ints = {k: int(c * den) for k, c in self._t.items()}
        g = 0
        for c in ints.values():
            g = _gcd(g, c)
            if g == 1:
                break
        _, lc = max(ints.items(), key=lambda kv: _grlex(kv[0]))
        if lc < 0:
            g = -g
        prim = BiPoly._raw({k: c // g for k, c in ints.items()})
        return _q(Fraction(g, den)), prim

    def canonical(self) -> "BiPoly":
        return self.integer_content()[1]

    def is_canonical(self) -> bool:
        return self.is_zero() or self.integer_content()[0] == 1

    def equal_up_to_scalar(self, other: "BiPoly") -> bool:
        return self.canonical() == BiPoly._lift(other).canonical()

    # -- dense conversions ------------------------------------------------

    def _to_yx(self, outer: str) -> list:
        """Integer-coefficient dense form; ``outer`` is the list index variable."""
        if outer == "u":
            deg = self.degree_u
            rows = [dict() for _ in range(deg + 1)]
            for (i, j), c in self._t.items():
                rows[i][j] = c
        else:
            deg = self.degree_v
            rows = [dict() for _ in range(deg + 1)]
            for (i, j), c in self._t.items():
                rows[j][i] = c
        out = []
        for r in rows:
            if not r:
                out.append(_dense.ZERO)
                continue
            n = max(r) + 1
            row = [0] * n
            for k, c in r.items():
                row[k] = int(c)
            out.append(tuple(row))
        return _dense.yx_norm(out)

    @classmethod
    def _from_yx(cls, rows: list, outer: str) -> "BiPoly":
        t = {}
        for a, row in enumerate(rows):
            for b, c in enumerate(row):
                if c:
                    t[(a, b) if outer == "u" else (b, a)] = c
        return cls._raw(t)

    def coefficient_matrix(self):
        """Dense float64 array ``M[i, j]`` holding the coefficient of ``u^i v^j``."""
        import numpy as np

        m = np.zeros((max(self.degree_u, 0) + 1, max(self.degree_v, 0) + 1))
        for (i, j), c in self._t.items():
            m[i, j] = float(c)
        return m

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": list(_VARS),
            "terms": [{"c": str(c), "u": i, "v": j} for (i, j), c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data) -> "BiPoly":
        if isinstance(data, str):
            data = json.loads(data)
        if list(data.get("vars", _VARS)) != list(_VARS):
            raise ValueError(f"expected vars {list(_VARS)}, got {data.get('vars')}")
        return cls((((t["u"], t["v"]), Fraction(t["c"])) for t in data["terms"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    # -- display ------------------------------------------------------------

    def __str__(self):
        if not self._t:
            return "0"
        pieces = []
        for (i, j), c in self.sorted_terms():
            mono = "*".join(
                s for s in (_power("u", i), _power("v", j)) if s
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"BiPoly({str(self)!r})"


def _power(name, k):
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


U = BiPoly.monomial(1, 0)
V = BiPoly.monomial(0, 1)


class RatFunc:
    """Reduced quotient ``num / den`` of bivariate polynomials.

    ``den`` is canonical (integer content 1, positive leading coefficient)
    and coprime to ``num``; the scalar lives in ``num``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = BiPoly._lift(num) if not isinstance(num, BiPoly) else num
        if den is None:
            den = BiPoly.constant(1)
        elif not isinstance(den, BiPoly):
            den = BiPoly._lift(den)
        if num is None or den is None:
            raise TypeError("RatFunc parts must be polynomials or rationals")
        if den.is_zero():
            raise DivisionByZeroPoly("denominator is the zero polynomial")
        if num.is_zero():
            self.num, self.den = num, BiPoly.constant(1)
            return
        if not reduced:
            g = gcd_bivariate(num, den)
            if not g.is_constant():
                num = _divide_known(num, g)
                den = _divide_known(den, g)
        scale, den = den.integer_content()
        if scale != 1:
            num = num * (Fraction(1) / scale)
        self.num, self.den = num, den

    @staticmethod
    def _lift(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, BiPoly):
            return RatFunc(other, reduced=True)
        if _is_scalar(other):
            return RatFunc(BiPoly.constant(other), reduced=True)
        return None

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> BiPoly:
        if not self.is_polynomial():
            raise ValueError("rational function has a nonconstant denominator")
        return self.num / self.den.constant_value()

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        g = gcd_bivariate(self.den, o.den)
        a = _divide_known(self.den, g)
        b = _divide_known(o.den, g)
        return RatFunc(self.num * b + o.num * a, a * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        g1 = gcd_bivariate(self.num, o.den)
        g2 = gcd_bivariate(o.num, self.den)
        n1, d2 = _divide_known(self.num, g1), _divide_known(o.den, g1)
        n2, d1 = _divide_known(o.num, g2), _divide_known(self.den, g2)
        return RatFunc(n1 * n2, d1 * d2, reduced=True)

    __rmul__ = __mul__

    def reciprocal(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZeroPoly("reciprocal of zero")
        return RatFunc(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise DivisionByZeroPoly("division by the zero polynomial")
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return RatFunc(self.num**k, self.den**k, reduced=True)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def diff(self, var: str) -> "RatFunc":
        n, d = self.num, self.den
        if d.is_constant():
            return RatFunc(n.diff(var), d, reduced=True)
        return RatFunc(n.diff(var) * d - n * d.diff(var), d * d)

    def __call__(self, u, v):
        return self.num(u, v) / self.den(u, v)

    def compose(self, u_expr, v_expr) -> "RatFunc":
        return RatFunc._lift(self.num.compose(u_expr, v_expr)) / RatFunc._lift(
            self.den.compose(u_expr, v_expr)
        )

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> "RatFunc":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(BiPoly.from_json(data["num"]), BiPoly.from_json(data["den"]))

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


# ---------------------------------------------------------------------------
# Module-level operations.


def arith(p, q, op: str):
    """Apply ``op`` in {add, sub, mul, div, pow}; ``pow`` takes an int exponent in ``q``."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "div":
        if isinstance(q, (BiPoly, RatFunc)) and (q.num if isinstance(q, RatFunc) else q).is_zero():
            raise DivisionByZeroPoly("division by the zero polynomial")
        return RatFunc._lift(p) / q
    if op == "pow":
        return p**q
    raise ValueError(f"unknown operation {op!r}")


def derivative(p, var: str):
    """Exact partial derivative; returns the same kind of object it was given."""
    return p.diff(var)


def _monomial_part(p: BiPoly):
    return p.ord_u, p.ord_v


def _shift(p: BiPoly, a: int, b: int) -> BiPoly:
    return BiPoly._raw({(i - a, j - b): c for (i, j), c in p._t.items()})


def gcd_bivariate(p: BiPoly, q: BiPoly) -> BiPoly:
    """Canonical greatest common divisor of two polynomials.

    Monomial factors are split off first; the remaining parts go through a
    subresultant PRS over Z[v][u] followed by content extraction.
    """
    p, q = BiPoly._lift(p), BiPoly._lift(q)
    if p.is_zero():
        return q.canonical()
    if q.is_zero():
        return p.canonical()
    (pa, pb), (qa, qb) = _monomial_part(p), _monomial_part(q)
    ma, mb = min(pa, qa), min(pb, qb)
    mono = BiPoly.monomial(ma, mb)
    if p.is_monomial() or q.is_monomial():
        return mono
    p1, q1 = _shift(p, pa, pb), _shift(q, qa, qb)
    if p1.is_constant() or q1.is_constant():
        return mono
    a = p1.canonical()._to_yx("u")
    b = q1.canonical()._to_yx("u")
    g = BiPoly._from_yx(_dense.yx_gcd(a, b), "u").canonical()
    if mono.is_constant():
        return g
    return (g * mono).canonical()


def _divide_known(p: BiPoly, d: BiPoly) -> BiPoly:
    q = exact_divide(p, d)
    if q is None:
        raise ArithmeticError("internal error: divisor does not divide")
    return q


def exact_divide(p: BiPoly, d: BiPoly):
    """Return ``q`` with ``q * d == p`` exactly, or ``None`` when ``d`` does not divide ``p``."""
    p, d = BiPoly._lift(p), BiPoly._lift(d)
    if d.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    if p.is_zero():
        return p
    if d.is_monomial():
        ((a, b), c), = d._t.items()
        if p.ord_u < a or p.ord_v < b:
            return None
        inv = Fraction(1) / c if c not in (1, -1) else c
        return BiPoly._raw({(i - a, j - b): _q(v * inv) for (i, j), v in p._t.items()})
    sp, P = p.integer_content()
    sd, D = d.integer_content()
    rem = P._to_yx("u")
    den = D._to_yx("u")
    dd = len(den) - 1
    if len(rem) - 1 < dd:
        return None
    lc = den[-1]
    quot = [_dense.ZERO] * (len(rem) - dd)
    try:
        for k in range(len(rem) - 1 - dd, -1, -1):
            c = rem[k + dd] if k + dd < len(rem) else _dense.ZERO
            if not c:
                continue
            qk = _dense.zx_divexact(c, lc)
            quot[k] = qk
            for i, y in enumerate(den):
                if y:
                    rem[k + i] = _dense.zx_sub(rem[k + i], _dense.zx_mul(qk, y))
    except ArithmeticError:
        return None
    if any(rem[:dd]):
        return None
    out = BiPoly._from_yx(_dense.yx_norm(quot), "u")
    scale = Fraction(sp) / Fraction(sd)
    return out * scale if scale != 1 else out


def resultant(p: BiPoly, q: BiPoly, eliminate: str = "v") -> UniPoly:
    """Resultant with respect to ``eliminate``, a polynomial in the other variable.

    The value is the exact Sylvester resultant of ``p`` and ``q`` (not only
    up to a scalar), including rational scale factors.
    """
    if eliminate not in _VARS:
        raise ValueError(f"unknown variable {eliminate!r}")
    p, q = BiPoly._lift(p), BiPoly._lift(q)
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    dp, dq = p.degree(eliminate), q.degree(eliminate)
    if dp <= 0 and dq <= 0:
        raise ValueError(f"neither input depends on {eliminate}")
    keep = "u" if eliminate == "v" else "v"
    sp, P = p.integer_content()
    sq, Q = q.integer_content()
    r = _dense.yx_resultant(P._to_yx(eliminate), Q._to_yx(eliminate))
    scale = Fraction(sp) ** dq * Fraction(sq) ** dp
    return UniPoly([c * scale for c in r], keep)


def specialize(p, s, var: str = "v", denominator=None) -> UniPoly:
    """Substitute ``var := s / denominator`` into ``p`` and return a univariate polynomial.

    ``s`` (and optional ``denominator``) are polynomials in the remaining
    variable, given as :class:`UniPoly`, :class:`BiPoly` free of ``var``, or
    rationals. With a denominator the result is homogenized:
    ``p(.., s/d) * d**deg_var(p)``.
    """
    if var not in _VARS:
        raise ValueError(f"unknown variable {var!r}")
    keep = "u" if var == "v" else "v"
    p = BiPoly._lift(p)

    def as_uni(x):
        if isinstance(x, UniPoly):
            return UniPoly(x.coeffs, keep)
        if isinstance(x, BiPoly):
            if x.degree(var) > 0:
                raise ValueError(f"substitution must not involve {var}")
            cs = {}
            for (i, j), c in x._t.items():
                cs[i if keep == "u" else j] = c
            n = max(cs, default=-1) + 1
            return UniPoly([cs.get(k, 0) for k in range(n)], keep)
        return UniPoly((x,), keep)

    s = as_uni(s)
    d = as_uni(denominator) if denominator is not None else None
    deg = max(p.degree(var), 0)
    # Collect p as sum_k a_k(keep) * var^k.
    parts: dict = {}
    for (i, j), c in p._t.items():
        k, e = (j, i) if var == "v" else (i, j)
        parts.setdefault(k, {})[e] = c
    spow = [UniPoly((1,), keep)]
    for _ in range(deg):
        spow.append(spow[-1] * s)
    dpow = None
    if d is not None:
        dpow = [UniPoly((1,), keep)]
        for _ in range(deg):
            dpow.append(dpow[-1] * d)
    acc = UniPoly((), keep)
    for k, cs in parts.items():
        n = max(cs) + 1
        a = UniPoly([cs.get(e, 0) for e in range(n)], keep)
        term = a * spow[k]
        if dpow is not None:
            term = term * dpow[deg - k]
        acc = acc + term
    return acc


def _coords(at):
    if hasattr(at, "first") and hasattr(at, "second"):
        return at.first, at.second
    u, v = at
    return u, v


def eval_complex(p, at, precision: int = DEFAULT_PRECISION):
    """Evaluate ``p`` (BiPoly or RatFunc) at a complex point in working precision ``precision`` bits.

    Returns an ``mpc``. For a rational function a denominator smaller than
    ``POLE_TOLERANCE * (1 + |numerator|)`` raises :class:`PoleError`.
    """
    ctx = context(precision)
    u, v = _coords(at)
    u, v = to_mpc(ctx, u), to_mpc(ctx, v)
    if isinstance(p, RatFunc):
        n = _eval_ctx(p.num, u, v, ctx)
        d = _eval_ctx(p.den, u, v, ctx)
        if abs(d) < POLE_TOLERANCE * (1 + abs(n)):
            raise PoleError(f"denominator vanishes at ({complex(u)}, {complex(v)})")
        return n / d
    return _eval_ctx(BiPoly._lift(p), u, v, ctx)


def _eval_ctx(p: BiPoly, u, v, ctx):
    if p.is_zero():
        return ctx.mpc(0)
    du, dv = p.degree_u, p.degree_v
    pu = [ctx.mpc(1)]
    for _ in range(du):
        pu.append(pu[-1] * u)
    pv = [ctx.mpc(1)]
    for _ in range(dv):
        pv.append(pv[-1] * v)
    acc = ctx.mpc(0)
    for (i, j), c in p._t.items():
        cc = ctx.mpf(c) if isinstance(c, int) else ctx.mpf(c.numerator) / c.denominator
        acc += cc * pu[i] * pv[j]
    return acc


# ---------------------------------------------------------------------------
# A small parser for human-written polynomials such as "u^2*(v-1) - 3*u*v + 1/2".

_TOKEN = re.compile(r"\s*(?:(\d+)|([uv])|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.replace("−", "-")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse polynomial near {text[pos:pos + 10]!r}")
        num, var, op = m.groups()
        out.append(("num", int(num)) if num else ("var", var) if var else ("op", op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self):
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                acc = RatFunc._lift(acc) / rhs
        return acc

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() in (("op", "^"), ("op", "**")):
            self.take()
            kind, k = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer literal")
            return base**k
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return BiPoly.constant(val)
        if kind == "var":
            return U if val == "u" else V
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {val!r}")


def parse(text: str):
    """Parse a polynomial or rational-function expression in u and v.

    Returns a :class:`BiPoly` when the expression is polynomial (division by
    constants allowed), otherwise a reduced :class:`RatFunc`.
    """
    parser = _Parser(_tokenize(text))
    out = parser.expr()
    if parser.i != len(parser.toks):
        raise ValueError(f"trailing input in {text!r}")
    if isinstance(out, RatFunc) and out.is_polynomial():
        return out.as_poly()
    return out
