"""Per-thread mpmath contexts keyed by binary precision.

mpmath's global ``mp`` context is process-wide state; handing each thread its
own context keeps numeric routines free of shared mutable state.
"""

import threading
from fractions import Fraction

import mpmath

DEFAULT_PRECISION = 128

_local = threading.local()


def context(precision: int = DEFAULT_PRECISION) -> mpmath.ctx_mp.MPContext:
    if precision < 24:
        raise ValueError("precision must be at least 24 bits")
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(precision)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.prec = precision
        cache[precision] = ctx
    return ctx


def to_mpc(ctx, x):
    """``ctx.mpc(x)`` that also accepts ``Fraction`` values."""
    if isinstance(x, Fraction):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    return ctx.mpc(x)
