"""Data behind the figures: bifurcation sweeps and implicit-curve samples.

``sweep_bifurcation`` follows the critical orbit for a range of parameters
c; ``implicit_curve`` traces the real zero set of a polynomial (or of
``|lambda| - 1``) by marching squares with bisection-refined vertices;
``figure_bundle`` writes both to CSV/SVG files with a JSON manifest.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .bipoly import U, V, BiPoly, RatFunc
from .dynamics import Plane, derive_period_curve, eigenvalue_symbolic

__all__ = [
    "SweepConfig",
    "SweepResult",
    "sweep_bifurcation",
    "transitions",
    "GridSpec",
    "CurveSampleGrid",
    "implicit_curve",
    "modulus_locus",
    "c_level_poly",
    "pull_back_xy",
    "figure_bundle",
    "write_svg",
    "C_LEVELS",
]

# Parameter values of the c-level figures.
C_LEVELS = (Fraction(1, 4), Fraction(0), Fraction(-1), Fraction(-3, 2), Fraction(-2))


# ---------------------------------------------------------------------------
# Bifurcation sweep.


@dataclass(frozen=True)
class SweepConfig:
    c_min: float = -2.0
    c_max: float = 0.25
    c_steps: int = 2000
    transient: int = 1000
    keep: int = 256
    escape_radius: float = 10.0
    plane: Plane = Plane.UV
    cluster_tol: float = 1e-5
    max_clusters: int = 64

    def __post_init__(self):
        if not isinstance(self.plane, Plane):
            object.__setattr__(self, "plane", Plane(str(self.plane).upper()))
        if not self.c_min < self.c_max:
            raise ValueError("c_min must be smaller than c_max")
        if min(self.transient, self.keep, self.c_steps) <= 0:
            raise ValueError("transient, keep and c_steps must be positive")
        if not self.escape_radius > 2:
            raise ValueError("escape_radius must exceed 2")

    def grid(self) -> np.ndarray:
        return np.linspace(self.c_min, self.c_max, self.c_steps)


_STATUS = {kernels.OK: "ok", kernels.ESCAPED: "escaped", kernels.SINGULAR: "singular"}


def _distinct_points(first: np.ndarray, second: np.ndarray, tol: float) -> np.ndarray:
    """Distinct (first, second) pairs after snapping to a ``tol`` grid, sorted lexicographically."""
    keys = np.round(np.column_stack([first, second]) / tol)
    _, idx = np.unique(keys, axis=0, return_index=True)
    pts = np.column_stack([first, second])[np.sort(idx)]
    return pts[np.lexsort((pts[:, 1], pts[:, 0]))]


def _recurrence_periods(first: np.ndarray, second: np.ndarray, tol: float, limit: int) -> np.ndarray:
    """Smallest p <= limit with |z_{k+p} - z_k| <= tol over the whole window, else 0."""
    m, keep = first.shape
    out = np.zeros(m, dtype=np.int64)
    todo = np.ones(m, dtype=bool)
    with np.errstate(invalid="ignore"):
        for p in range(1, min(limit, keep - 1) + 1):
            d = np.maximum(
                np.abs(first[:, p:] - first[:, :-p]).max(axis=1),
                np.abs(second[:, p:] - second[:, :-p]).max(axis=1),
            )
            hit = todo & (d <= tol)
            out[hit] = p
            todo &= ~hit
            if not todo.any():
                break
    return out


@dataclass
class SweepResult:
    config: SweepConfig
    c: np.ndarray
    samples: np.ndarray
    second: np.ndarray
    status: list
    branches: list = field(default_factory=list)
    periods: list = field(default_factory=list)

    def period_at(self, c: float):
        k = int(np.argmin(np.abs(self.c - c)))
        return self.periods[k]

    def to_csv(self, path_or_buf) -> None:
        """Rows ``c,branch_index,first,second``, one per distinct attractor point."""
        own = isinstance(path_or_buf, (str, os.PathLike))
        fh = open(path_or_buf, "w", newline="") if own else path_or_buf
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["c", "branch_index", "first", "second"])
            for c, pts in zip(self.c, self.branches):
                for k, (a, b) in enumerate(pts):
                    w.writerow([repr(float(c)), k, repr(float(a)), repr(float(b))])
        finally:
            if own:
                fh.close()


def sweep_bifurcation(cfg: SweepConfig = SweepConfig()) -> SweepResult:
    """Attractor samples of the critical orbit for each c of the configured grid.

    Each column starts at the central critical point, ``(0, c)`` on the XY
    plane or ``(c, c**2 + c)`` on the UV plane, runs ``transient`` steps and
    records the next ``keep`` points. Escaping or singular columns carry no
    samples. The period is the smallest ``p <= max_clusters`` for which every
    kept point returns within ``cluster_tol`` after p steps (both
    coordinates, since on the UV plane u alone is constant along 2-cycles),
    or ``None`` for escaped, singular or chaotic columns. ``branches`` holds
    the distinct attractor points of each column as a ``(k, 2)`` array.
    """
    cs = cfg.grid()
    samples, second, status = kernels.sweep(
        cs, cfg.plane is Plane.UV, cfg.transient, cfg.keep, cfg.escape_radius
    )
    labels = [_STATUS[int(s)] for s in status]
    rec = _recurrence_periods(samples, second, cfg.cluster_tol, cfg.max_clusters)
    branches, periods = [], []
    for row, row2, lab, p in zip(samples, second, labels, rec.tolist()):
        if lab != "ok":
            branches.append(np.empty((0, 2)))
            periods.append(None)
            continue
        if p:
            # one period of the settled orbit
            branches.append(_distinct_points(row[-p:], row2[-p:], cfg.cluster_tol))
        else:
            branches.append(_distinct_points(row, row2, cfg.cluster_tol))
        periods.append(p if p else None)
    return SweepResult(cfg, cs, samples, second, labels, branches, periods)


def transitions(result: SweepResult) -> list:
    """``(c, old_period, new_period)`` wherever the detected period changes, scanning c downward.

    Columns without a period (escaped, singular, chaotic) are skipped.
    """
    out = []
    prev = None
    for c, p in zip(result.c[::-1].tolist(), result.periods[::-1]):
        if p is None:
            continue
        if prev is not None and p != prev:
            out.append((c, prev, p))
        prev = p
    return out


# ---------------------------------------------------------------------------
# Implicit curves.


@dataclass(frozen=True)
class GridSpec:
    bbox: tuple  # (u_min, u_max, v_min, v_max)
    resolution: tuple = (401, 401)

    def __post_init__(self):
        u0, u1, v0, v1 = (float(x) for x in self.bbox)
        if not (u0 < u1 and v0 < v1):
            raise ValueError("bounding box must have positive width and height")
        nx, ny = self.resolution
        if nx < 2 or ny < 2:
            raise ValueError("resolution must be at least 2 in each direction")


@dataclass
class CurveSampleGrid:
    bbox: tuple
    resolution: tuple
    segments: list
    max_residual: float = 0.0

    def vertices(self) -> np.ndarray:
        if not self.segments:
            return np.empty((0, 2))
        return np.vstack(self.segments)

    def to_csv(self, path_or_buf) -> None:
        own = isinstance(path_or_buf, (str, os.PathLike))
        fh = open(path_or_buf, "w", newline="") if own else path_or_buf
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["segment_id", "vertex_index", "u", "v"])
            for sid, seg in enumerate(self.segments):
                for k, (a, b) in enumerate(seg):
                    w.writerow([sid, k, repr(float(a)), repr(float(b))])
        finally:
            if own:
                fh.close()


class _Field:
    """Real-valued function on the plane built from polynomials, vectorized over arrays.

    ``kind == "poly"``: value of ``p``. ``kind == "modulus"``: ``|num| - |den|``,
    which has the sign of ``|num/den| - 1`` and no poles.
    """

    def __init__(self, kind, polys):
        self.kind = kind
        self.mats = [p.coefficient_matrix() for p in polys]

    def grid(self, us, vs):
        vals = [kernels.eval_grid(m, us, vs) for m in self.mats]
        return vals[0] if self.kind == "poly" else np.abs(vals[0]) - np.abs(vals[1])

    def at(self, u, v):
        vals = [np.polynomial.polynomial.polyval2d(u, v, m) for m in self.mats]
        return vals[0] if self.kind == "poly" else np.abs(vals[0]) - np.abs(vals[1])


def _as_field(f) -> _Field:
    if isinstance(f, _Field):
        return f
    if isinstance(f, RatFunc):
        return _Field("poly", [f.num])
    if isinstance(f, BiPoly):
        return _Field("poly", [f])
    raise TypeError("implicit_curve expects a BiPoly, RatFunc or modulus_locus(...)")


def modulus_locus(r: RatFunc) -> _Field:
    """The curve ``|r| = 1`` as an implicit function, for :func:`implicit_curve`."""
    return _Field("modulus", [r.num, r.den])


# Segment table: case index (bit k set when corner k is positive; corners
# 0=(i,j), 1=(i+1,j), 2=(i+1,j+1), 3=(i,j+1)) -> pairs of cell edges
# (0 bottom, 1 right, 2 top, 3 left). Cases 5 and 10 depend on the centre.
_CASES = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)], 6: [(0, 2)], 7: [(3, 2)],
    8: [(2, 3)], 9: [(0, 2)], 11: [(1, 2)], 12: [(3, 1)], 13: [(0, 1)], 14: [(3, 0)],
}
_SADDLE = {
    (5, True): [(0, 1), (2, 3)], (5, False): [(3, 0), (1, 2)],
    (10, True): [(3, 0), (1, 2)], (10, False): [(0, 1), (2, 3)],
}


def implicit_curve(f, spec: GridSpec, tol: float = 1e-10) -> CurveSampleGrid:
    """Polylines approximating the real zero set of ``f`` inside ``spec.bbox``.

    Sign changes on the sample grid are located by marching squares (saddle
    cells resolved by the centre average), crossing points are refined by
    bisection along their cell edge until the bracket is shorter than ``tol``,
    and cell segments are chained through shared edges.
    """
    field_ = _as_field(f)
    u0, u1, v0, v1 = (float(x) for x in spec.bbox)
    nx, ny = spec.resolution
    us = np.linspace(u0, u1, nx)
    vs = np.linspace(v0, v1, ny)
    F = field_.grid(us, vs)  # F[j, i] at (us[i], vs[j])
    pos = F > 0

    # Edge ids: horizontal edge (i,j)-(i+1,j) -> j*(nx-1)+i;
    # vertical edge (i,j)-(i,j+1) -> H + j*nx + i.
    H = ny * (nx - 1)

    def h_id(i, j):
        return j * (nx - 1) + i

    def v_id(i, j):
        return H + j * nx + i

    case = (
        pos[:-1, :-1].astype(np.int8)
        | (pos[:-1, 1:].astype(np.int8) << 1)
        | (pos[1:, 1:].astype(np.int8) << 2)
        | (pos[1:, :-1].astype(np.int8) << 3)
    )
    centre = (F[:-1, :-1] + F[:-1, 1:] + F[1:, 1:] + F[1:, :-1]) > 0
    jj, ii = np.nonzero((case != 0) & (case != 15))
    segs = []
    for j, i in zip(jj.tolist(), ii.tolist()):
        c = int(case[j, i])
        pairs = _CASES.get(c) or _SADDLE[(c, bool(centre[j, i]))]
        edge = (h_id(i, j), v_id(i + 1, j), h_id(i, j + 1), v_id(i, j))
        for a, b in pairs:
            segs.append((edge[a], edge[b]))
    if not segs:
        return CurveSampleGrid(tuple(spec.bbox), tuple(spec.resolution), [], 0.0)

    ids = np.array(sorted({e for s in segs for e in s}), dtype=np.int64)
    is_h = ids < H
    hid, vid = ids[is_h], ids[~is_h] - H
    # Edge endpoints.
    pa = np.empty((ids.size, 2))
    pb = np.empty((ids.size, 2))
    hi, hj = hid % (nx - 1), hid // (nx - 1)
    vi, vj = vid % nx, vid // nx
    pa[is_h] = np.column_stack([us[hi], vs[hj]])
    pb[is_h] = np.column_stack([us[hi + 1], vs[hj]])
    pa[~is_h] = np.column_stack([us[vi], vs[vj]])
    pb[~is_h] = np.column_stack([us[vi], vs[vj + 1]])
    fa = np.where(is_h, 0.0, 0.0)
    fa[is_h] = F[hj, hi]
    fa[~is_h] = F[vj, vi]
    pts = _bisect(field_, pa, pb, fa > 0, tol)
    where = {int(e): k for k, e in enumerate(ids)}
    segments = []
    for line in _chain(segs):
        seg = pts[[where[e] for e in line]]
        keep = np.ones(len(seg), dtype=bool)
        keep[1:] = np.max(np.abs(np.diff(seg, axis=0)), axis=1) > 10 * tol
        seg = seg[keep]
        if len(seg) >= 2:
            segments.append(seg)
    resid = np.abs(field_.at(pts[:, 0], pts[:, 1]))
    return CurveSampleGrid(tuple(spec.bbox), tuple(spec.resolution), segments, float(resid.max()))


def _bisect(field_: _Field, pa, pb, a_pos, tol):
    lo, hi = pa.copy(), pb.copy()
    # Keep lo on the non-positive side.
    swap = a_pos
    lo[swap], hi[swap] = pb[swap], pa[swap]
    length = np.max(np.abs(hi - lo), axis=1).max()
    steps = max(int(np.ceil(np.log2(max(length, tol) / tol))) + 1, 1)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        fm = field_.at(mid[:, 0], mid[:, 1]) > 0
        hi = np.where(fm[:, None], mid, hi)
        lo = np.where(fm[:, None], lo, mid)
    return 0.5 * (lo + hi)


def _chain(segs):
    """Join segments sharing an edge id into polylines, deterministically."""
    adj: dict = {}
    for k, (a, b) in enumerate(segs):
        adj.setdefault(a, []).append(k)
        adj.setdefault(b, []).append(k)
    used = [False] * len(segs)
    lines = []

    def walk(start):
        line = [start]
        node = start
        while True:
            nxt = None
            for k in adj[node]:
                if not used[k]:
                    nxt = k
                    break
            if nxt is None:
                return line
            used[nxt] = True
            a, b = segs[nxt]
            node = b if a == node else a
            line.append(node)

    for node in sorted(n for n, ks in adj.items() if len(ks) == 1):
        if any(not used[k] for k in adj[node]):
            lines.append(walk(node))
    for k in range(len(segs)):
        if not used[k]:
            lines.append(walk(segs[k][0]))
    return lines


# ---------------------------------------------------------------------------
# Curve families and the figure bundle.


def c_level_poly(c, plane: Plane = Plane.UV) -> BiPoly:
    """Polynomial whose zero set is the level set ``c(.) = c``; variables named u, v in both planes."""
    c = Fraction(c)
    if Plane(plane) is Plane.XY:
        return V - U**2 - c
    return -(U**4) + U**2 * (2 * V - 3) - V**2 + 4 * U * V - 4 * c * U**2


def pull_back_xy(f):
    """Express a (u, v) polynomial or rational function in (x, y), reusing the names u, v."""
    u_expr = U + V
    v_expr = U + V**2 + V - U**2
    return f.compose(u_expr, v_expr)


def write_svg(grid: CurveSampleGrid, path, stroke: str = "black") -> None:
    """One path per polyline; the viewBox is the bounding box with v pointing up."""
    u0, u1, v0, v1 = (float(x) for x in grid.bbox)
    width = (u1 - u0) / 400
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{u0!r} {v0!r} {u1 - u0!r} {v1 - v0!r}">'
    ]
    for seg in grid.segments:
        d = " ".join(
            f"{'M' if k == 0 else 'L'}{float(a):.10g},{float(v0 + v1 - b):.10g}"
            for k, (a, b) in enumerate(seg)
        )
        parts.append(f'<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width:.6g}"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def figure_bundle(
    out_dir,
    period_max: int = 5,
    bbox=(-3.0, 3.0, -3.0, 3.0),
    resolution=(401, 401),
    plane: Plane = Plane.UV,
    formats=("csv",),
    sweep: SweepConfig | None = None,
) -> dict:
    """Write every figure family to ``out_dir`` and return the manifest.

    Families: orbit curves ``C_1..C_period_max``, multiplier loci
    ``|lambda_n| = 1``, c-level curves for ``C_LEVELS``, the critical locus,
    the real Mandelbrot segment and, when ``sweep`` is given, a bifurcation
    sweep.
    """
    if not 1 <= period_max <= 5:
        raise ValueError("period_max must be between 1 and 5")
    plane = Plane(plane)
    spec = GridSpec(tuple(bbox), tuple(resolution))
    os.makedirs(out_dir, exist_ok=True)
    files = []

    def emit(name, family, obj, **meta):
        for fmt in formats:
            path = os.path.join(out_dir, f"{name}.{fmt}")
            if fmt == "csv":
                obj.to_csv(path)
            elif fmt == "svg":
                write_svg(obj, path)
            else:
                raise ValueError(f"unknown format {fmt!r}")
            files.append({"file": os.path.basename(path), "family": family, **meta})

    def on_plane(f):
        return pull_back_xy(f) if plane is Plane.XY else f

    for n in range(1, period_max + 1):
        curve = derive_period_curve(n, validate=False).poly
        emit(f"orbit_curve_C{n}", "orbit_curve", implicit_curve(on_plane(curve), spec), period=n)
        lam = eigenvalue_symbolic(n)
        emit(
            f"eigenvalue_locus_{n}",
            "eigenvalue_locus",
            implicit_curve(modulus_locus(on_plane(lam)), spec),
            period=n,
        )
    for c in C_LEVELS:
        tag = str(c).replace("/", "_").replace("-", "m")
        emit(f"c_level_{tag}", "c_level", implicit_curve(c_level_poly(c, plane), spec), c=str(c))
    if plane is Plane.UV:
        crit = V - U**2 - U
        mand = np.column_stack([np.linspace(-2, 0.25, 226), np.linspace(-2, 0.25, 226) ** 2 + np.linspace(-2, 0.25, 226)])
    else:
        crit = U
        mand = np.column_stack([np.zeros(226), np.linspace(-2, 0.25, 226)])
    emit("critical_locus", "critical_locus", implicit_curve(crit, spec))
    emit("mandelbrot_segment", "mandelbrot_segment", CurveSampleGrid(tuple(bbox), tuple(resolution), [mand]))
    manifest = {
        "plane": plane.value,
        "period_max": period_max,
        "bbox": list(bbox),
        "resolution": list(resolution),
        "formats": list(formats),
        "c_levels": [str(c) for c in C_LEVELS],
        "kernel_backend": kernels.BACKEND,
        "files": files,
    }
    if sweep is not None:
        res = sweep_bifurcation(sweep)
        res.to_csv(os.path.join(out_dir, "bifurcation_sweep.csv"))
        cfg = asdict(sweep)
        cfg["plane"] = sweep.plane.value
        manifest["sweep"] = cfg
        files.append({"file": "bifurcation_sweep.csv", "family": "bifurcation_sweep"})
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
