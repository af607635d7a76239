"""Dense univariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational


def _q(c):
    """Coerce to int when integral, otherwise Fraction."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _q(Fraction(c.numerator, c.denominator))
    raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")


class UniPoly:
    """Univariate polynomial, coefficients ascending by degree.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var: str = "u"):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def from_roots(cls, roots, var="u"):
        p = cls((1,), var)
        for r in roots:
            p = p * cls((-r, 1), var)
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("UniPoly", self.coeffs))

    def _lift(self, other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly((other,), self.var)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly((), self.var)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out = UniPoly((1,), self.var)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = [Fraction(c) for c in self.coeffs]
        db = other.degree
        lb = Fraction(other.lc)
        if len(rem) - 1 < db:
            return UniPoly((), self.var), self
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] / lb
            quot[k] = q
            if q:
                for i, y in enumerate(other.coeffs):
                    rem[k + i] -= q * y
        return UniPoly(quot, self.var), UniPoly(rem[:db], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lc = Fraction(self.lc)
        return UniPoly([Fraction(c) / lc for c in self.coeffs], self.var)

    def primitive(self) -> "UniPoly":
        """Integer multiple with content 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        if ints[-1] < 0:
            g = -g
        return UniPoly([c // g for c in ints], self.var)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd over Q."""
        a, b = self, self._lift(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_decomposition(self) -> list:
        """Yun's algorithm: list of ``(factor, multiplicity)`` with monic squarefree factors."""
        if self.degree < 1:
            return []
        f = self.monic()
        fp = f.derivative()
        a = f.gcd(fp)
        b = f // a
        c = fp // a
        d = c - b.derivative()
        out = []
        i = 1
        while b.degree >= 1:
            a = b.gcd(d)
            b = b // a
            c = d // a
            if a.degree >= 1:
                out.append((a, i))
            d = c - b.derivative()
            i += 1
        return out

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mon = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            mag = abs(c)
            body = str(mag) if not mon else (mon if mag == 1 else f"{mag}*{mon}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text
