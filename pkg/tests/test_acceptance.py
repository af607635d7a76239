"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line through ``report``; the lines are printed
in the pytest terminal summary and when this file is run as a script.
"""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from uvorbits._mp import context
from uvorbits.bipoly import U, RatFunc, eval_complex, parse, specialize
from uvorbits.cli import run
from uvorbits.diagram import SweepConfig, sweep_bifurcation, transitions
from uvorbits.dynamics import (
    CPoint,
    Plane,
    derive_period_curve,
    eigenvalue_numeric,
    eigenvalue_symbolic,
    minimal_period,
    step,
    transform,
)
from uvorbits.errors import SingularPoint
from uvorbits.loci import critical_cycles, mandelbrot_segment, neutral_points
from uvorbits.reference import diff_table, regenerate
from uvorbits.roots import solve_univariate

FORMS = json.loads((Path(__file__).parent / "data" / "closed_forms.json").read_text())
RESULTS = {}


def report(k: int, ok: bool, detail: str) -> None:
    RESULTS[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


# 1 -------------------------------------------------------------------------


def test_criterion_01_curve_derivation_exactness():
    script = (
        "import time; t=time.perf_counter()\n"
        "from uvorbits.dynamics import derive_period_curve\n"
        "import json\n"
        "out={n: derive_period_curve(n).poly.dumps() for n in range(1,6)}\n"
        "print(json.dumps({'t': time.perf_counter()-t, 'curves': out}))\n"
    )
    res = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True, check=True)
    data = json.loads(res.stdout)
    bad = []
    for n in range(1, 6):
        ours = parse(str(derive_period_curve(n).poly))
        ref = parse(FORMS["curves"][str(n)]).canonical()
        fresh = json.loads(data["curves"][str(n)])
        if ours != ref or json.dumps(fresh, sort_keys=True) != json.dumps(ref.to_json(), sort_keys=True):
            bad.append(n)
    ok = not bad and data["t"] < 60
    report(1, ok, f"C1..C5 exact (mismatch at {bad or 'none'}), fresh-process runtime {data['t']:.2f} s < 60 s")
    assert ok


# 2 -------------------------------------------------------------------------


def reference_eigenvalue(n: int):
    if str(n) in FORMS["eigenvalues"]:
        return parse(FORMS["eigenvalues"][str(n)])
    spec = FORMS["eigenvalue_factors"][str(n)]
    num = parse("1")
    for f in spec["factors"]:
        num = num * parse(f)
    return RatFunc(num * spec["sign"], U ** spec["den_u_power"])


def test_criterion_02_eigenvalue_exactness():
    bad = [n for n in range(1, 6) if eigenvalue_symbolic(n) != reference_eigenvalue(n)]
    flipped = [n for n in bad if eigenvalue_symbolic(n) == -reference_eigenvalue(n)]
    ok = not bad
    report(2, ok, f"lambda_1..lambda_5 vs closed forms; differing at {bad or 'none'}"
                  + (f" (equal up to sign at {flipped})" if flipped else ""))
    assert ok


# 3 -------------------------------------------------------------------------


def test_criterion_03_central_critical_polynomials():
    bad = []
    for n in (3, 4, 5):
        uni = specialize(derive_period_curve(n).poly, U**2 + U, "v")
        coeffs = list(uni.coeffs)
        if coeffs[-1] < 0:  # curves are fixed only up to the canonical unit
            coeffs = [-c for c in coeffs]
        if coeffs != FORMS["central_critical"][str(n)]:
            bad.append(n)
    ok = not bad
    report(3, ok, f"C_n(u, u^2+u) coefficients for n=3,4,5 (up to the unit); mismatch at {bad or 'none'}")
    assert ok


# 4 -------------------------------------------------------------------------


def is_real(p, tol=1e-9):
    return abs(complex(p.point.first).imag) < tol and abs(complex(p.point.second).imag) < tol


def test_criterion_04_table_regression():
    worst, failures = 0.0, []
    for table in ("neutral-3", "critical-3", "critical-4", "critical-5-real"):
        d = diff_table(table, regenerate(table), 1e-6)
        worst = max([worst] + [m.distance for m in d.matches])
        if not d.ok:
            failures.append(table)
    real31 = sum(is_real(p) for p in regenerate("neutral-3"))
    cyc4 = critical_cycles(4)
    real_cycles4 = sum(all(is_real(p) for p in c) for c in cyc4)
    real5 = sum(is_real(p) for c in critical_cycles(5) for p in c)
    census = (real31, len(cyc4), sum(len(c) for c in cyc4), real_cycles4, real5)
    ok = not failures and census == (6, 6, 24, 2, 15)
    report(4, ok, f"all four tables worst distance {worst:.1e} (<= 1e-6), failing {failures or 'none'}; "
                  f"census real neutral-3={real31}, cycles4={len(cyc4)}/{census[2]} pts, real cycles4={real_cycles4}, real5={real5}")
    assert ok


# 5 -------------------------------------------------------------------------


def test_criterion_05_low_period_neutral_points():
    ctx = context(128)
    s = ctx.sqrt(2)
    expected = {1: [(1, 1), (-1, -1)], 2: [(-1, -1 + s), (-1, -1 - s), (-1, -1)]}
    worst = 0
    ok = True
    for n, refs in expected.items():
        pts = neutral_points(n)
        for p in pts:
            d = min(max(abs(p.point.first - a), abs(p.point.second - b)) for a, b in refs)
            worst = max(worst, float(d))
        found = [min(max(abs(p.point.first - a), abs(p.point.second - b)) for p in pts) for a, b in refs]
        ok &= all(float(f) <= 1e-10 for f in found)
    ok &= worst <= 1e-10
    report(5, ok, f"period 1 -> (+-1, +-1), period 2 -> (-1, -1 +- sqrt 2); worst deviation {worst:.1e} <= 1e-10")
    assert ok


# 6 -------------------------------------------------------------------------


def test_criterion_06_mandelbrot_segment():
    seg = mandelbrot_segment()
    got = (seg["start"], seg["end"], seg["vertex"])
    want = ((Fraction(-2), Fraction(2)), (Fraction(1, 4), Fraction(5, 16)), (Fraction(-1, 2), Fraction(-1, 4)))
    exact = all(isinstance(x, Fraction) for pair in got for x in pair)
    ok = got == want and exact
    report(6, ok, f"v(-2)={got[0][1]}, v(1/4)={got[1][1]}, vertex=({got[2][0]}, {got[2][1]}) as exact rationals")
    assert ok


# 7 -------------------------------------------------------------------------


def periodic_points(n: int, count: int, seed: int):
    rng = random.Random(seed)
    curve = derive_period_curve(n).poly
    ctx = context(128)
    pts = []
    while len(pts) < count:
        v0 = Fraction(rng.randint(-300, 300), 100)
        if n == 1:
            candidates = [ctx.mpc(Fraction(v0).numerator) / Fraction(v0).denominator]
        else:
            uni = specialize(curve, v0, "v")
            if uni.degree < 1:
                continue
            candidates = [r.value for r in solve_univariate(uni).roots]
        for u0 in candidates:
            if abs(u0) < 1e-6 or len(pts) == count:
                continue
            p = CPoint(u0, ctx.mpc(v0.numerator) / v0.denominator)
            try:
                if minimal_period(p, n) != n:
                    continue
            except SingularPoint:
                continue
            pts.append(p)
    return pts


def test_criterion_07_conjugacy_and_product_identity():
    rng = random.Random(7)
    worst = 0.0
    for _ in range(1000):
        p = CPoint(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)), complex(rng.uniform(-2, 2), rng.uniform(-2, 2)), Plane.XY)
        try:
            a = transform(step(p), Plane.UV)
            b = step(transform(p, Plane.UV))
        except SingularPoint:
            continue
        worst = max(worst, a.distance(b) / (1 + a.norm()))
    conj_ok = worst <= 1e-9
    failing = []
    for n in range(1, 6):
        bad_r = bad_q = 0
        for p in periodic_points(n, 50, seed=100 + n):
            pr = pq = 1
            q = p
            for _ in range(n):
                pr, pq = pr * q.first, pq * q.second
                q = step(q)
            bad_r += abs(pr - 1) > 1e-8
            bad_q += abs(pq - 1) > 1e-8
        if bad_r or bad_q:
            failing.append(f"n={n}: R fails {bad_r}/50, Q fails {bad_q}/50")
    ok = conj_ok and not failing
    report(7, ok, f"conjugacy worst {worst:.1e} (<= 1e-9); product identity "
                  + ("holds for n <= 5" if not failing else "violated: " + "; ".join(failing)))
    assert ok


# 8 -------------------------------------------------------------------------


def test_criterion_08_symbolic_vs_numeric_eigenvalue():
    worst = 0.0
    count = 0
    for table in ("neutral-3", "critical-3", "critical-4", "critical-5-real"):
        for p in regenerate(table):
            lam_sym = eval_complex(eigenvalue_symbolic(p.period), p.point)
            lam_num = eigenvalue_numeric(p.point, p.period)
            # relative error, with unit floor so that critical cycles (lambda = 0) are measured absolutely
            worst = max(worst, float(abs(lam_sym - lam_num) / max(abs(lam_num), 1)))
            count += 1
    for n in (3, 4, 5):
        for cyc in critical_cycles(n):
            for p in cyc:
                lam_sym = eval_complex(eigenvalue_symbolic(n), p.point)
                worst = max(worst, float(abs(lam_sym - eigenvalue_numeric(p.point, n)) / max(abs(p.eigenvalue), 1)))
                count += 1
    ok = worst <= 1e-9
    report(8, ok, f"{count} table/cycle points, worst relative difference {worst:.1e} <= 1e-9")
    assert ok


# 9 -------------------------------------------------------------------------


def test_criterion_09_bifurcation_sweep():
    t = time.perf_counter()
    res = sweep_bifurcation(SweepConfig())
    elapsed = time.perf_counter() - t
    tr = transitions(res)
    first = next((c for c, a, b in tr if (a, b) == (1, 2)), None)
    second = next((c for c, a, b in tr if (a, b) == (2, 4)), None)
    p3 = res.period_at(-1.754877666)
    window = [c for c, p in zip(res.c, res.periods) if p == 3 and abs(c + 1.7549) < 0.02]
    ok = (
        first is not None and abs(first + 0.75) <= 0.01
        and second is not None and abs(second + 1.25) <= 0.01
        and p3 == 3 and len(res.c) == 2000 and elapsed < 10
    )
    report(9, ok, f"1->2 at c={first:.4f}, 2->4 at c={second:.4f} (within 0.01 of -3/4, -5/4); "
                  f"period {p3} at -1.754877666, window [{min(window):.4f}, {max(window):.4f}]; "
                  f"2000 columns in {elapsed:.2f} s")
    assert ok


# 10 ------------------------------------------------------------------------


def test_criterion_10_documented_count_discrepancy(capsys):
    code = run(["tables", "--period", "4", "--diff", "--out", "/dev/null"])
    err4 = capsys.readouterr().err
    code5 = run(["tables", "--period", "5", "--diff", "--out", "/dev/null"])
    err5 = capsys.readouterr().err
    lines = [l for l in (err4 + err5).splitlines() if l.startswith("documented-discrepancy")]
    ok = code == 0 and code5 == 0 and len(lines) == 3 and not [l for l in (err4 + err5).splitlines() if l.startswith("mismatch")]
    report(10, ok, "reference counts 56/194/75 reported in the tables --diff channel: " + " | ".join(
        l.split(": ", 1)[1] for l in lines))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
