"""Embedded reference tables and their regeneration.

The package ships reference point tables as decimal strings in
``data/reference_tables.json``. :func:`regenerate` recomputes the points of a
table with the solvers of :mod:`uvorbits.loci`, and :func:`diff_table`
matches reference rows to computed points one to one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from ._mp import DEFAULT_PRECISION
from .loci import ClassifiedPoint, critical_cycles, neutral_points

__all__ = [
    "TABLE_IDS",
    "ReferenceRow",
    "Match",
    "TableDiff",
    "load_reference",
    "reference_rows",
    "reference_counts",
    "tables_for_period",
    "regenerate",
    "diff_table",
    "count_report",
]

TABLE_IDS = ("neutral-3", "critical-3", "critical-4", "critical-5-real")


@dataclass(frozen=True)
class ReferenceRow:
    index: int
    u: complex
    v: complex


@dataclass(frozen=True)
class Match:
    row: int
    computed: int | None
    distance: float


@dataclass
class TableDiff:
    table: str
    matches: list
    unmatched_computed: list
    tol: float

    @property
    def mismatches(self) -> list:
        return [m for m in self.matches if m.computed is None or m.distance > self.tol]

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.unmatched_computed

    def report_lines(self) -> list:
        out = []
        for m in self.mismatches:
            if m.computed is None:
                out.append(f"table {self.table} row {m.row}: no computed point")
            else:
                out.append(
                    f"table {self.table} row {m.row}: nearest computed point {m.computed} "
                    f"at distance {m.distance:.3e} > {self.tol:g}"
                )
        for k in self.unmatched_computed:
            out.append(f"table {self.table}: computed point {k} has no reference row")
        return out


@lru_cache(maxsize=1)
def load_reference() -> dict:
    with resources.files("uvorbits").joinpath("data/reference_tables.json").open() as fh:
        return json.load(fh)


def _parse_part(text: str) -> float:
    text = text.strip().replace(" ", "")
    sign = 1.0
    if text[:1] in "+-":
        sign = -1.0 if text[0] == "-" else 1.0
        text = text[1:]
    if text.startswith("sqrt("):
        inner, _, rest = text[5:].partition(")")
        value = float(Fraction(inner)) ** 0.5
        if rest:
            if not rest.startswith("/"):
                raise ValueError(f"cannot read reference value {text!r}")
            value /= float(Fraction(rest[1:]))
        return sign * value
    return sign * float(Fraction(text))


def _parse_value(entry: dict) -> complex:
    return complex(_parse_part(entry["re"]), _parse_part(entry["im"]))


def reference_rows(table: str) -> list:
    data = load_reference()["tables"][table]
    return [ReferenceRow(k, _parse_value(u), _parse_value(v)) for k, (u, v) in enumerate(data["rows"])]


def reference_counts() -> dict:
    return load_reference()["counts"]


def tables_for_period(n: int) -> list:
    tabs = load_reference()["tables"]
    return [t for t in TABLE_IDS if tabs[t]["period"] == n]


def _is_real(p: ClassifiedPoint, tol: float = 1e-9) -> bool:
    return abs(complex(p.point.first).imag) <= tol and abs(complex(p.point.second).imag) <= tol


def _sort_key(p: ClassifiedPoint):
    u, v = complex(p.point.first), complex(p.point.second)
    return (round(u.real, 9), round(u.imag, 9), round(v.real, 9), round(v.imag, 9))


def regenerate(table: str, precision: int = DEFAULT_PRECISION) -> list:
    """Computed points of a reference table, sorted by coordinates.

    ``neutral-3`` lists the distinct neutral period-3 points, ``critical-3``
    and ``critical-4`` all critical points of their period, and
    ``critical-5-real`` the real critical points of period 5.
    """
    if table not in TABLE_IDS:
        raise ValueError(f"unknown table {table!r}; expected one of {', '.join(TABLE_IDS)}")
    meta = load_reference()["tables"][table]
    n = meta["period"]
    if meta["kind"] == "neutral":
        pts = neutral_points(n, precision=precision)
    else:
        pts = [p for cyc in critical_cycles(n, precision) for p in cyc]
        if table == "critical-5-real":
            pts = [p for p in pts if _is_real(p)]
    return sorted(pts, key=_sort_key)


def diff_table(table: str, computed: list, tol: float = 1e-6) -> TableDiff:
    """Greedy one-to-one matching of reference rows to computed points (max-norm)."""
    rows = reference_rows(table)
    coords = [(complex(p.point.first), complex(p.point.second)) for p in computed]
    pairs = []
    for r in rows:
        for k, (u, v) in enumerate(coords):
            pairs.append((max(abs(u - r.u), abs(v - r.v)), r.index, k))
    pairs.sort()
    taken_rows, taken_pts, best = set(), set(), {}
    for d, i, k in pairs:
        if i in taken_rows or k in taken_pts:
            continue
        taken_rows.add(i)
        taken_pts.add(k)
        best[i] = Match(i, k, d)
    matches = [best.get(r.index, Match(r.index, None, float("inf"))) for r in rows]
    extra = [k for k in range(len(coords)) if k not in taken_pts]
    return TableDiff(table, matches, extra, tol)


def count_report(n: int, precision: int = DEFAULT_PRECISION, compute_neutral_up_to: int = 4) -> list:
    """Reference solution counts for period n next to the counts found here.

    Each entry is a dict with ``quantity``, ``reference`` and ``found`` (or
    ``None`` when the computation is beyond ``compute_neutral_up_to``).
    """
    expected = reference_counts().get(str(n), {})
    out = []
    for quantity, value in sorted(expected.items()):
        found = None
        detail = ""
        if quantity == "critical_points":
            found = sum(len(c) for c in critical_cycles(n, precision))
        elif quantity == "neutral_solutions" and n <= compute_neutral_up_to:
            pts = neutral_points(n, precision=precision)
            found = sum(p.multiplicity for p in pts)
            detail = f"{len(pts)} distinct"
        out.append({"period": n, "quantity": quantity, "reference": value, "found": found, "detail": detail})
    return out
