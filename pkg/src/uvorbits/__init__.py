"""Periodic orbits of the quadratic family x^2 + c in (u, v) coordinates.

Exact bivariate polynomial algebra (:mod:`uvorbits.bipoly`), the map G and
its symbolic iterates (:mod:`uvorbits.dynamics`), polynomial root finding
(:mod:`uvorbits.roots`), critical and neutral loci (:mod:`uvorbits.loci`)
and figure data (:mod:`uvorbits.diagram`).
"""

__version__ = "0.1.0"

from .bipoly import U, V, BiPoly, RatFunc, gcd_bivariate, parse, resultant, specialize
from .dynamics import (
    CPoint,
    CurveEq,
    Plane,
    c_value,
    derive_period_curve,
    eigenvalue_numeric,
    eigenvalue_symbolic,
    orbit,
    step,
    symbolic_iterate,
    transform,
)
from .errors import (
    DepthExceeded,
    Diverged,
    DivisionByZeroPoly,
    NoConvergence,
    NotPeriodic,
    PlaneMismatch,
    PoleError,
    SingularJacobian,
    SingularPoint,
    UVOrbitsError,
    ValidationFailed,
)
from .loci import (
    ClassifiedPoint,
    classify,
    critical_cycles,
    intersect_curves,
    mandelbrot_real,
    mandelbrot_segment,
    neutral_points,
)
from .roots import Root, RootSet, newton_polish_2d, solve_univariate

__all__ = [
    "__version__",
    "U", "V", "BiPoly", "RatFunc", "gcd_bivariate", "parse", "resultant", "specialize",
    "CPoint", "CurveEq", "Plane", "c_value", "derive_period_curve", "eigenvalue_numeric",
    "eigenvalue_symbolic", "orbit", "step", "symbolic_iterate", "transform",
    "DepthExceeded", "Diverged", "DivisionByZeroPoly", "NoConvergence", "NotPeriodic",
    "PlaneMismatch", "PoleError", "SingularJacobian", "SingularPoint", "UVOrbitsError",
    "ValidationFailed",
    "ClassifiedPoint", "classify", "critical_cycles", "intersect_curves", "mandelbrot_real",
    "mandelbrot_segment", "neutral_points",
    "Root", "RootSet", "newton_polish_2d", "solve_univariate",
]
