"""Dense integer polynomial kernels.

Two layers live here:

* ``zx_*`` functions act on univariate polynomials over Z stored as tuples
  of Python ints in ascending degree with no trailing zeros (``()`` is zero).
* ``yx_*`` functions act on polynomials over Z[x] in a second variable y,
  stored as lists of ``zx`` tuples indexed by the y-degree.

The bivariate gcd and resultant in :mod:`uvorbits.bipoly` are thin wrappers
around :func:`yx_gcd` and :func:`yx_resultant`, which run the subresultant
polynomial remainder sequence (Collins / Brown-Traub) with exact divisions,
so intermediate coefficients never leave Z[x].
"""

from __future__ import annotations

from math import gcd

ZERO: tuple = ()
ONE: tuple = (1,)

# Kronecker substitution beats schoolbook multiplication past this length.
_KRONECKER_MIN = 24


def zx_norm(a) -> tuple:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def zx_add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return zx_norm(out)


def zx_sub(a: tuple, b: tuple) -> tuple:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return zx_norm(out)


def zx_neg(a: tuple) -> tuple:
    return tuple(-c for c in a)


def zx_scale(a: tuple, k: int) -> tuple:
    if k == 0:
        return ZERO
    return tuple(c * k for c in a)


def _pack(a: tuple, shift: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc << shift) + c
    return acc


def _unpack(value: int, shift: int, length: int) -> list:
    mask = (1 << shift) - 1
    half = 1 << (shift - 1)
    out = []
    for _ in range(length):
        c = value & mask
        if c >= half:
            c -= 1 << shift
        out.append(c)
        value = (value - c) >> shift
    return out


def zx_mul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ZERO
    if len(a) == 1:
        return zx_scale(b, a[0])
    if len(b) == 1:
        return zx_scale(a, b[0])
    if min(len(a), len(b)) >= _KRONECKER_MIN:
        bound = max(abs(c) for c in a).bit_length() + max(abs(c) for c in b).bit_length()
        shift = bound + min(len(a), len(b)).bit_length() + 2
        prod = _pack(a, shift) * _pack(b, shift)
        return zx_norm(_unpack(prod, shift, len(a) + len(b) - 1))
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return zx_norm(out)


def zx_pow(a: tuple, k: int) -> tuple:
    result = ONE
    base = a
    while k:
        if k & 1:
            result = zx_mul(result, base)
        k >>= 1
        if k:
            base = zx_mul(base, base)
    return result


def zx_divexact(a: tuple, b: tuple) -> tuple:
    """Quotient ``a / b``; raises ``ArithmeticError`` unless ``b`` divides ``a`` in Z[x]."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return ZERO
    if len(b) == 1:
        d = b[0]
        out = []
        for c in a:
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError("inexact division in Z[x]")
            out.append(q)
        return tuple(out)
    rem = list(a)
    lb = b[-1]
    db = len(b) - 1
    if len(rem) - 1 < db:
        raise ArithmeticError("inexact division in Z[x]")
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db]
        if c:
            q, r = divmod(c, lb)
            if r:
                raise ArithmeticError("inexact division in Z[x]")
            quot[k] = q
            for i, y in enumerate(b):
                rem[k + i] -= q * y
    if any(rem[:db]):
        raise ArithmeticError("inexact division in Z[x]")
    return zx_norm(quot)


def zx_content(a: tuple) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def zx_primitive(a: tuple) -> tuple:
    """Primitive part with positive leading coefficient."""
    if not a:
        return ZERO
    g = zx_content(a)
    if a[-1] < 0:
        g = -g
    return tuple(c // g for c in a)


def zx_prem(a: tuple, b: tuple) -> tuple:
    """Pseudo-remainder ``lc(b)**(deg a - deg b + 1) * a mod b`` over Z."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return a
    lb = b[-1]
    rem = list(a)
    e = da - db + 1
    while rem and len(rem) - 1 >= db:
        k = len(rem) - 1 - db
        lr = rem[-1]
        rem = [c * lb for c in rem]
        for i, y in enumerate(b):
            rem[k + i] -= lr * y
        rem = list(zx_norm(rem))
        e -= 1
    if e:
        f = lb**e
        rem = [c * f for c in rem]
    return tuple(rem)


def zx_gcd(a: tuple, b: tuple) -> tuple:
    """Primitive gcd over Z with positive leading coefficient (content included)."""
    if not a:
        return zx_primitive(b) if not b else zx_scale(zx_primitive(b), zx_content(b))
    if not b:
        return zx_scale(zx_primitive(a), zx_content(a))
    c = gcd(zx_content(a), zx_content(b))
    a, b = zx_primitive(a), zx_primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return (c,)
        r = zx_prem(a, b)
        a, b = b, zx_primitive(r) if r else ZERO
    return zx_scale(a, c)


# ---------------------------------------------------------------------------
# Polynomials over Z[x] in an outer variable y.


def yx_norm(a) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def yx_content(a: list) -> tuple:
    g = ZERO
    for c in a:
        g = zx_gcd(g, c) if g else zx_scale(zx_primitive(c), zx_content(c))
        if g == ONE:
            break
    if g and g[-1] < 0:
        g = zx_neg(g)
    return g


def yx_divexact_scalar(a: list, d: tuple) -> list:
    return [zx_divexact(c, d) for c in a]


def yx_mul_scalar(a: list, d: tuple) -> list:
    return yx_norm(zx_mul(c, d) for c in a)


def yx_prem(a: list, b: list) -> list:
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return list(a)
    lb = b[-1]
    rem = list(a)
    e = da - db + 1
    while rem and len(rem) - 1 >= db:
        k = len(rem) - 1 - db
        lr = rem[-1]
        rem = [zx_mul(c, lb) for c in rem]
        for i, y in enumerate(b):
            if y:
                rem[k + i] = zx_sub(rem[k + i], zx_mul(lr, y))
        rem = yx_norm(rem)
        e -= 1
    if e and rem:
        f = zx_pow(lb, e)
        rem = [zx_mul(c, f) for c in rem]
    return rem


def yx_primitive(a: list) -> list:
    """Divide out the Z[x]-content and make the leading coefficient's lc positive."""
    if not a:
        return []
    c = yx_content(a)
    out = yx_divexact_scalar(a, c)
    if out[-1][-1] < 0:
        out = [zx_neg(t) for t in out]
    return out


def yx_gcd(a: list, b: list) -> list:
    """Greatest common divisor in Z[x][y] by the subresultant PRS.

    The result is primitive over Z with a positive leading coefficient
    (leading in y, then in x).
    """
    a, b = yx_norm(a), yx_norm(b)
    if not a:
        return yx_primitive(b) if b else []
    if not b:
        return yx_primitive(a)
    if len(a) < len(b):
        a, b = b, a
    ca, cb = yx_content(a), yx_content(b)
    d = zx_gcd(ca, cb)
    a = yx_divexact_scalar(a, ca)
    b = yx_divexact_scalar(b, cb)
    g = h = ONE
    while True:
        if len(b) == 1:
            b = [ONE]
            break
        delta = len(a) - len(b)
        r = yx_prem(a, b)
        if not r:
            break
        if len(r) == 1:
            b = [ONE]
            break
        a, b = b, yx_divexact_scalar(r, zx_mul(g, zx_pow(h, delta)))
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = zx_divexact(zx_pow(g, delta), zx_pow(h, delta - 1))
    out = yx_mul_scalar(yx_primitive(b), d)
    if out and out[-1][-1] < 0:
        out = [zx_neg(t) for t in out]
    return out


def yx_resultant(a: list, b: list) -> tuple:
    """Resultant of ``a`` and ``b`` with respect to y, as an element of Z[x]."""
    a, b = yx_norm(a), yx_norm(b)
    if not a or not b:
        return ZERO
    da, db = len(a) - 1, len(b) - 1
    if da == 0 and db == 0:
        raise ValueError("both inputs are free of the eliminated variable")
    if db == 0:
        return zx_pow(b[0], da)
    if da == 0:
        return zx_pow(a[0], db)
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -1
    g = h = ONE
    while True:
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = yx_prem(a, b)
        if not r:
            return ZERO
        a, b = b, yx_divexact_scalar(r, zx_mul(g, zx_pow(h, delta)))
        da, db = db, len(b) - 1
        g = a[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = zx_divexact(zx_pow(g, delta), zx_pow(h, delta - 1))
        if db == 0:
            break
    # h <- h^(1 - da) * lc(b)^da
    lcb = b[0]
    if da == 0:
        out = zx_mul(h, ONE)
    else:
        out = zx_divexact(zx_pow(lcb, da), zx_pow(h, da - 1))
    return zx_scale(out, s)
