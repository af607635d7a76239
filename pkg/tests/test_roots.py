import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from uvorbits.bipoly import parse
from uvorbits.dynamics import CPoint
from uvorbits.errors import NoConvergence, SingularJacobian
from uvorbits.roots import newton_polish_2d, real_filter, solve_numeric, solve_univariate
from uvorbits.unipoly import UniPoly


def sorted_complex(zs):
    return sorted((complex(z) for z in zs), key=lambda z: (round(z.real, 8), round(z.imag, 8)))


@pytest.mark.parametrize("seed", range(8))
def test_random_integer_polynomials_against_numpy(seed):
    rng = random.Random(seed)
    deg = rng.randint(2, 14)
    coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [rng.choice([-3, -1, 1, 2])]
    rs = solve_univariate(UniPoly(coeffs))
    ours = sorted_complex(rs.with_multiplicity())
    ref = sorted_complex(np.roots(coeffs[::-1]))
    assert len(ours) == len(ref)
    # numpy is only double precision; compare by matching
    for z in ref:
        assert min(abs(z - w) for w in ours) < 1e-6


def test_roots_from_constructed_factors():
    roots = [Fraction(1, 3), Fraction(-2), Fraction(5, 7)]
    rs = solve_univariate(UniPoly.from_roots(roots))
    got = sorted(float(r.value.real) for r in rs.roots)
    assert got == pytest.approx(sorted(float(r) for r in roots), abs=1e-30)
    assert all(r.is_real for r in rs.roots)
    assert max(r.error for r in rs.roots) < 1e-25


def test_multiplicities_are_exact():
    p = UniPoly.from_roots([1, 1, 1, -2, -2]) * UniPoly([1, 0, 1])  # (u-1)^3 (u+2)^2 (u^2+1)
    rs = solve_univariate(p)
    mult = {(round(float(r.value.real), 9), round(float(r.value.imag), 9)): r.multiplicity for r in rs.roots}
    assert mult == {(1.0, 0.0): 3, (-2.0, 0.0): 2, (0.0, 1.0): 1, (0.0, -1.0): 1}
    assert len(rs.with_multiplicity()) == 7


def test_zero_root_and_conjugates():
    p = UniPoly([0, 0, 5, -2, 1])  # u^2 (u^2 - 2u + 5)
    rs = solve_univariate(p)
    vals = {complex(r.value): r.multiplicity for r in rs.roots}
    assert vals[0j] == 2
    assert vals[1 + 2j] == 1 and vals[1 - 2j] == 1


def test_high_precision_agrees_with_mpmath():
    coeffs = [Fraction(k % 5 - 2, k % 3 + 1) for k in range(20)] + [Fraction(1)]
    rs = solve_univariate(UniPoly(coeffs), precision=256)
    mpmath.mp.prec = 256
    ref = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)],
                           maxsteps=200, extraprec=256)
    for z in ref:
        assert min(abs(mpmath.mpc(z) - mpmath.mpc(w.real, w.imag)) for w in rs.values()) < mpmath.mpf(10) ** -60


def test_solve_numeric_complex_coefficients():
    # (z - i)(z - 2)
    rs = solve_numeric([2j, -(2 + 1j), 1])
    assert sorted_complex(rs.values()) == pytest.approx(sorted_complex([2, 1j]), abs=1e-30)


def test_real_filter():
    rs = solve_univariate(UniPoly([-2, 0, 0, 1]))  # u^3 = 2
    reals = real_filter(rs)
    assert len(reals) == 1 and float(reals[0]) == pytest.approx(2 ** (1 / 3), rel=1e-15)


def test_degree_errors():
    with pytest.raises(ValueError):
        solve_univariate(UniPoly([3]))


def test_no_convergence_reports_best():
    with pytest.raises(NoConvergence) as info:
        solve_univariate(UniPoly([1, 2, 3, 4, 5, 6, 7, 1]), max_sweeps=1)
    assert info.value.best is not None


def test_newton_polish_circle_line():
    f, g = parse("u^2 + v^2 - 2"), parse("u - v")
    p = newton_polish_2d((f, g), CPoint(1.1, 0.93))
    assert abs(complex(p.first) - 1) < 1e-30 and abs(complex(p.second) - 1) < 1e-30


def test_newton_polish_exact_start():
    f, g = parse("u*v - 1"), parse("u + v - 5/2")
    p = newton_polish_2d((f, g), CPoint(Fraction(19, 10), Fraction(1, 2)))
    assert abs(complex(p.first) - 2) < 1e-30


def test_newton_polish_singular():
    f, g = parse("u - v"), parse("2*u - 2*v")
    with pytest.raises(SingularJacobian):
        newton_polish_2d((f, g), CPoint(0.3, 0.1))
