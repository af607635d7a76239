import cmath
from fractions import Fraction

import pytest

from uvorbits.bipoly import parse
from uvorbits.dynamics import CPoint, c_value, minimal_period, orbit
from uvorbits.errors import NotPeriodic
from uvorbits.loci import (
    CSV_HEADER,
    central_critical_points,
    classify,
    classify_multiplier,
    critical_cycles,
    intersect_curves,
    mandelbrot_real,
    mandelbrot_segment,
    neutral_points,
    to_csv,
)


def test_classify_multiplier_bands():
    assert classify_multiplier(0) == "super_attracting"
    assert classify_multiplier(1e-12) == "super_attracting"
    assert classify_multiplier(0.5j) == "attracting"
    assert classify_multiplier(-1 + 1e-12) == "neutral"
    assert classify_multiplier(1j) == "neutral"
    assert classify_multiplier(1.01) == "repulsive"


def test_classify_two_cycle_point():
    cp = classify(CPoint(-1, -0.5), 2)
    assert cp.classification == "attracting"
    assert complex(cp.eigenvalue) == pytest.approx(0.75)
    with pytest.raises(NotPeriodic):
        classify(CPoint(2, 1), 2)


@pytest.mark.parametrize("n,cycles", [(3, 3), (4, 6), (5, 15)])
def test_critical_cycles_census(n, cycles):
    found = critical_cycles(n)
    assert len(found) == cycles
    assert all(len(c) == n for c in found)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_critical_cycles_brute_force(n):
    for cyc in critical_cycles(n):
        centre = cyc[0].point
        # the central point lies on the parabola v = u^2 + u
        assert abs(centre.second - centre.first**2 - centre.first) < 1e-25
        # x = 0 is n-periodic for x^2 + c with the cycle's c
        c = complex(c_value(centre))
        x = 0j
        for k in range(1, n + 1):
            x = x * x + c
            if k < n:
                assert abs(x) > 1e-8
        assert abs(x) < 1e-10
        for p in cyc:
            assert abs(p.eigenvalue) < 1e-20
            assert p.classification == "super_attracting"
            assert minimal_period(p.point, n) == n
        pts = orbit(centre, n - 1)
        for q, p in zip(pts, cyc):
            assert q.distance(p.point) < 1e-10


def test_central_critical_points_are_on_parabola():
    pts = central_critical_points(4)
    assert len(pts) == 6
    reals = [p for p in pts if abs(complex(p.point.first).imag) < 1e-20]
    assert len(reals) == 2


def test_neutral_period_one():
    pts = neutral_points(1)
    got = sorted((round(complex(p.point.first).real, 12), round(complex(p.point.second).real, 12)) for p in pts)
    assert got == [(-1.0, -1.0), (1.0, 1.0)]


def test_neutral_period_two_closed_form():
    pts = neutral_points(2)
    r2 = 2**0.5
    expected = {(-1.0, -1.0 + r2), (-1.0, -1.0 - r2), (-1.0, -1.0)}
    for p in pts:
        u, v = complex(p.point.first), complex(p.point.second)
        assert min(abs(u - a) + abs(v - b) for a, b in expected) < 1e-12
        assert abs(abs(complex(p.eigenvalue)) - 1) < 1e-12
    doubled = [p for p in pts if abs(complex(p.point.second) + 1) < 1e-12]
    assert len(doubled) == 1 and doubled[0].multiplicity == 2


def test_neutral_complex_target():
    t = cmath.exp(1j * 0.7)
    pts = neutral_points(2, targets=(t,))
    assert pts
    for p in pts:
        assert abs(complex(p.eigenvalue) - t) < 1e-10
        assert abs(complex(p.point.first) + 1) < 1e-10


def test_neutral_rejects_non_unit_target():
    with pytest.raises(ValueError):
        neutral_points(2, targets=(2,))


def test_period_three_neutral_multiplicity():
    pts = neutral_points(3)
    assert len(pts) == 14
    assert sum(p.multiplicity for p in pts) == 18
    real = [p for p in pts if abs(complex(p.point.first).imag) < 1e-12 and abs(complex(p.point.second).imag) < 1e-12]
    assert len(real) == 6


def test_intersect_curves_real_point():
    f = parse("u*v + v + 1")
    g = parse("u^2 + u*v - v - 2")
    pts = intersect_curves(f, g)
    sympy = pytest.importorskip("sympy")
    u, v = sympy.symbols("u v")
    ref = sympy.solve([u * v + v + 1, u**2 + u * v - v - 2], [u, v], dict=True)
    ref = [(complex(r[u]), complex(r[v])) for r in ref]
    ref = [r for r in ref if abs(r[0]) > 1e-12]
    assert sum(m for _, m in pts) == len(ref)
    for a, b in ref:
        assert min(abs(complex(p.first) - a) + abs(complex(p.second) - b) for p, _ in pts) < 1e-12
    for p, m in pts:
        assert abs(complex(f(p.first, p.second))) < 1e-20
        assert abs(complex(g(p.first, p.second))) < 1e-20


def test_mandelbrot_exact():
    seg = mandelbrot_segment()
    assert seg["start"] == (Fraction(-2), Fraction(2))
    assert seg["end"] == (Fraction(1, 4), Fraction(5, 16))
    assert seg["vertex"] == (Fraction(-1, 2), Fraction(-1, 4))
    assert mandelbrot_real(Fraction(-1)).inside and mandelbrot_real(-1).v == 0
    assert not mandelbrot_real(Fraction(3, 10)).inside
    assert not mandelbrot_real(-3).inside


def test_csv_output():
    pts = neutral_points(1)
    text = to_csv(pts)
    lines = text.strip().split("\n")
    assert lines[0].split(",") == CSV_HEADER
    assert len(lines) == 1 + len(pts)
