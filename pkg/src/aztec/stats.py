"""Monte Carlo aggregation and empirical verification reports.

Per-space frequency grids from the shuffling sampler, arctic-boundary
geometry of sampled tilings, height-concentration measurements against
the Azuma-style bounds, and exact-versus-limit convergence tables.

Sampled tilings are processed in the canon array format of
:mod:`aztec.shuffle`; heights are integrated column-wise with cumulative
sums, and polar regions are connected components (of each compass
class's covered cells) that touch the diamond boundary, so everything
heavy stays inside numpy/scipy.

Monte Carlo checks are calibrated once against fixed seeds and the
resulting thresholds frozen in ``data/calibration.json``; the test
suite asserts those thresholds and never re-randomizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import ndimage, stats as scipy_stats

from . import asymptotics, exactcore, shuffle
from .errors import DomainError
from .regions import aztec_diamond, boundary_heights

__all__ = [
    "EmpiricalGrid",
    "empirical_placement",
    "height_grid",
    "vertex_mask",
    "polar_cell_labels",
    "BoundaryReport",
    "arctic_report",
    "VarianceReport",
    "height_concentration",
    "height_difference_concentration",
    "ConvergenceRow",
    "convergence_report",
    "mean_height_error",
    "chi_square_pvalue",
    "binomial_stderr",
]


# ---------------------------------------------------------------------------
# Empirical placement frequencies


@dataclass
class EmpiricalGrid:
    """Per-space occupation counts over a batch of sampled tilings.

    counts[m + n - 1, ell + n - 1] is the number of samples placing a
    domino on the north-going space at (ell, m).
    """

    n: int
    samples: int
    counts: np.ndarray
    bias: Fraction | None = None
    seed: int | None = None

    def frequency(self, ell: int, m: int) -> float:
        return self.counts[m + self.n - 1, ell + self.n - 1] / self.samples

    def stderr(self, ell: int, m: int) -> float:
        f = self.frequency(ell, m)
        return math.sqrt(f * (1 - f) / self.samples)

    def locations(self):
        n = self.n
        return list(exactcore.north_locations(n))

    def to_csv(self, grid: exactcore.PlacementGrid | None = None) -> str:
        lines = ["ell,m,exact,empirical,stderr"]
        for ell, m in self.locations():
            exact = "" if grid is None else str(grid.value(ell, m))
            lines.append(
                f"{ell},{m},{exact},{self.frequency(ell, m):.12g},{self.stderr(ell, m):.12g}"
            )
        return "\n".join(lines) + "\n"


def binomial_stderr(freq: float, samples: int) -> float:
    return math.sqrt(freq * (1 - freq) / samples)


def _count_chunk(task):
    n, seed, nsamples, bias = task
    counts = np.zeros((2 * n - 1, 2 * n - 1), dtype=np.int64)
    for i in range(nsamples):
        canon = shuffle.sample_canon(n, seed + i, p=bias)
        # north canonical cell [i, j] is the space at (j - n + 1, i - n)
        counts += canon[1 : 2 * n, 0 : 2 * n - 1] == shuffle.CODE_N
    return counts


def empirical_placement(
    n: int, samples: int, seed: int, bias=None, threads: int = 1
) -> EmpiricalGrid:
    """Sample `samples` tilings (seeds seed, seed+1, ...) and count the
    occupied north-going spaces.  Distinct seeds are independent, so the
    work shards cleanly across processes when threads > 1."""
    if samples < 1:
        raise DomainError("need at least one sample")
    if threads > 1 and samples >= 2 * threads:
        from concurrent.futures import ProcessPoolExecutor

        chunk = (samples + threads - 1) // threads
        tasks = [
            (n, seed + lo, min(chunk, samples - lo), bias)
            for lo in range(0, samples, chunk)
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            counts = sum(pool.map(_count_chunk, tasks))
    else:
        counts = _count_chunk((n, seed, samples, bias))
    return EmpiricalGrid(n=n, samples=samples, counts=counts, bias=bias, seed=seed)


# ---------------------------------------------------------------------------
# Heights on the vertex grid


@lru_cache(maxsize=64)
def vertex_mask(n: int) -> np.ndarray:
    """(2n+1, 2n+1) mask of diamond vertices, index [vy + n, vx + n]."""
    vy, vx = np.mgrid[-n : n + 1, -n : n + 1]
    mask = np.abs(vx) + np.abs(vy) <= n + 1
    mask &= (np.abs(vx) <= n) & (np.abs(vy) <= n)
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=64)
def _column_anchor_heights(n: int) -> np.ndarray:
    """Boundary height at the top vertex of each column (index vx + n)."""
    bnd = boundary_heights(aztec_diamond(n))
    out = np.zeros(2 * n + 1, dtype=np.int64)
    for vx in range(-n, n + 1):
        vy_top = n + 1 - max(abs(vx), 1)
        out[vx + n] = bnd[(vx, vy_top)]
    return out


def height_grid(canon: np.ndarray, n: int) -> np.ndarray:
    """Heights of a tiling on the (2n+1)^2 vertex grid (anchor: west
    middle vertex = 0); entries off the diamond are meaningless.

    Walking south along the edge into (vx, vy), the height changes by
    +-1, or -+3 when a horizontal domino straddles the edge; the sign
    comes from the color of the square east of the edge.
    """
    # crossed[iy, ix]: a horizontal domino straddles the south-going edge
    # at x = vx = ix - n into vertex vy = iy - n (left square (vx-1, vy))
    hor = (canon == shuffle.CODE_N) | (canon == shuffle.CODE_S)
    crossed = np.zeros((2 * n, 2 * n + 1), dtype=bool)
    crossed[:, 1:-1] = hor[:, : 2 * n - 1]
    vy, vx = np.mgrid[-n:n, -n : n + 1]
    east_white = ((vx + vy) & 1) == (n & 1)
    delta_south = np.where(east_white, np.where(crossed, 3, -1), np.where(crossed, -3, 1))
    # suffix-sum the deltas downward from the top grid row, then pin
    # each column to its known boundary height at the column top
    heights = np.zeros((2 * n + 1, 2 * n + 1), dtype=np.int64)
    heights[:-1] = delta_south
    heights = np.cumsum(heights[::-1], axis=0)[::-1]
    cols = np.arange(-n, n + 1)
    top_rows = (n + 1 - np.maximum(np.abs(cols), 1)) + n
    anchor = _column_anchor_heights(n)
    offsets = anchor - heights[top_rows, np.arange(2 * n + 1)]
    return heights + offsets[None, :]


# ---------------------------------------------------------------------------
# Polar regions and the arctic boundary


_CLASS_CODES = (shuffle.CODE_N, shuffle.CODE_S, shuffle.CODE_E, shuffle.CODE_W)
_FOUR = ndimage.generate_binary_structure(2, 1)


def polar_cell_labels(canon: np.ndarray, n: int) -> np.ndarray:
    """Cell-level polar labels: the class code where the cell belongs to
    a polar region, 0 on the temperate zone (and off the diamond).

    A polar region is a connected component of one class's covered cells
    that touches the diamond boundary; cell 4-adjacency is exactly
    edge-adjacency of the dominoes involved.
    """
    mask = shuffle.diamond_cell_mask(n)
    rim = mask & ~ndimage.binary_erosion(mask, structure=_FOUR)
    out = np.zeros_like(canon)
    for code in _CLASS_CODES:
        cells = canon == code
        if code in (shuffle.CODE_N, shuffle.CODE_S):
            cells = cells | np.pad(cells, ((0, 0), (1, 0)))[:, :-1]
        else:
            cells = cells | np.pad(cells, ((1, 0), (0, 0)))[:-1, :]
        labels, count = ndimage.label(cells, structure=_FOUR)
        if not count:
            continue
        touching = np.unique(labels[rim & cells])
        touching = touching[touching > 0]
        if touching.size:
            out[np.isin(labels, touching)] = code
    return out


@dataclass
class BoundaryReport:
    """Temperate-zone frontier of one tiling versus the theoretical
    arctic curve (circle, or ellipse under bias)."""

    n: int
    bias: float | None
    boundary_points: list          # normalized (x, y) domino centers
    max_deviation: float
    degenerate: bool = False

    def to_row(self, sample_id) -> str:
        return f"{sample_id},{self.max_deviation:.12g},{int(self.degenerate)}"


def _curve_deviation(x: np.ndarray, y: np.ndarray, bias: float | None) -> np.ndarray:
    """Distance from each point to the arctic curve along its ray: for
    the circle this is | |z| - 1/sqrt(2) |, and the elliptical case
    scales the same way."""
    p = 0.5 if bias is None else float(bias)
    r = np.sqrt(x * x / p + y * y / (1 - p))
    norm = np.hypot(x, y)
    return np.abs(norm - np.where(r > 0, norm / np.maximum(r, 1e-300), 0.0))


def arctic_report(canon: np.ndarray, n: int, bias=None) -> BoundaryReport:
    """Frontier dominoes (temperate, adjacent to a polar domino) and
    their worst normalized deviation from the arctic curve."""
    labels = polar_cell_labels(canon, n)
    mask = shuffle.diamond_cell_mask(n)
    polar = labels > 0
    temperate = mask & ~polar
    if not temperate.any():
        return BoundaryReport(n, bias, [], 0.0, degenerate=True)
    near_polar = ndimage.binary_dilation(polar, structure=_FOUR) & temperate
    # pull back to whole dominoes: a frontier domino is any with a cell
    # flagged, collected at its canonical cell
    pts = []
    for code, (dx, dy) in (
        (shuffle.CODE_N, (1.0, 0.5)),
        (shuffle.CODE_S, (1.0, 0.5)),
        (shuffle.CODE_E, (0.5, 1.0)),
        (shuffle.CODE_W, (0.5, 1.0)),
    ):
        canonical = canon == code
        flagged = canonical & near_polar
        if code in (shuffle.CODE_N, shuffle.CODE_S):
            flagged |= canonical & np.pad(near_polar[:, 1:], ((0, 0), (0, 1)))
        else:
            flagged |= canonical & np.pad(near_polar[1:, :], ((0, 1), (0, 0)))
        ii, jj = np.nonzero(flagged)
        if ii.size:
            pts.append(((jj - n + dx) / n, (ii - n + dy) / n))
    if not pts:
        return BoundaryReport(n, bias, [], 0.0, degenerate=True)
    xs = np.concatenate([p[0] for p in pts])
    ys = np.concatenate([p[1] for p in pts])
    dev = _curve_deviation(xs, ys, bias)
    order = np.argsort(-dev)
    points = [(float(xs[k]), float(ys[k])) for k in order]
    return BoundaryReport(n, bias, points, float(dev.max()))


# ---------------------------------------------------------------------------
# Height concentration


@lru_cache(maxsize=256)
def boundary_path_length(n: int, vertex: tuple) -> int:
    """Edge count of a shortest lattice path from the vertex to the
    diamond boundary, staying on diamond vertices."""
    mask = vertex_mask(n)
    vx, vy = vertex
    if not mask[vy + n, vx + n]:
        raise DomainError(f"{vertex} is not a vertex of the order-{n} diamond")
    # boundary vertices: incident to a cell-edge on the region outline;
    # equivalently |vx| + |vy| in {n, n+1} on this mask
    avx, avy = abs(vx), abs(vy)
    if avx + avy >= n:
        return 0
    # interior: straight path north hits the boundary at |shortest| cost
    best = None
    for tx in range(-n, n + 1):
        for ty in range(-n, n + 1):
            if abs(tx) + abs(ty) >= n and mask[ty + n, tx + n]:
                d = abs(tx - vx) + abs(ty - vy)
                if best is None or d < best:
                    best = d
    return int(best)


@dataclass
class VarianceReport:
    n: int
    vertex: tuple
    m: int
    samples: int
    sample_mean: float
    sample_variance: float
    bound: float  # 64 m
    tail_bounds: dict   # c -> theoretical bound 2 exp(-c^2/32)
    tail_freqs: dict    # c -> observed frequency of |H - mean| > c sqrt(m)

    @property
    def within_bounds(self) -> bool:
        if self.sample_variance > self.bound:
            return False
        return all(
            self.tail_freqs[c] <= self.tail_bounds[c] for c in self.tail_freqs
        )


def _collect_heights(n, vertices, samples, seed, bias=None) -> np.ndarray:
    idx = [(vy + n, vx + n) for (vx, vy) in vertices]
    out = np.empty((samples, len(vertices)), dtype=np.int64)
    for i in range(samples):
        hg = height_grid(shuffle.sample_canon(n, seed + i, p=bias), n)
        for k, (iy, ix) in enumerate(idx):
            out[i, k] = hg[iy, ix]
    return out


def height_concentration(
    n: int,
    vertex: tuple,
    samples: int,
    seed: int,
    c_values: Sequence[float] = (2.0, 4.0, 6.0),
    bias=None,
) -> VarianceReport:
    """Sample variance and tail frequencies of the height at one vertex,
    against the variance bound 64 m and tails 2 exp(-c^2/32)."""
    vals = _collect_heights(n, [vertex], samples, seed, bias)[:, 0].astype(float)
    m = boundary_path_length(n, vertex)
    mean = float(vals.mean())
    var = float(vals.var(ddof=1))
    tb, tf = {}, {}
    for c in c_values:
        tb[c] = 2.0 * math.exp(-c * c / 32.0)
        tf[c] = float(np.mean(np.abs(vals - mean) > c * math.sqrt(m)))
    return VarianceReport(n, vertex, m, samples, mean, var, 64.0 * m, tb, tf)


def height_difference_concentration(
    n: int,
    vertex: tuple,
    other: tuple,
    samples: int,
    seed: int,
    c_values: Sequence[float] = (2.0, 4.0, 6.0),
) -> VarianceReport:
    """Same, for the difference H(v) - H(w) with m the path length
    between the two vertices."""
    vals = _collect_heights(n, [vertex, other], samples, seed)
    diffs = (vals[:, 0] - vals[:, 1]).astype(float)
    m = abs(vertex[0] - other[0]) + abs(vertex[1] - other[1])
    mean = float(diffs.mean())
    var = float(diffs.var(ddof=1))
    tb, tf = {}, {}
    for c in c_values:
        tb[c] = 2.0 * math.exp(-c * c / 32.0)
        tf[c] = float(np.mean(np.abs(diffs - mean) > c * math.sqrt(m)))
    return VarianceReport(n, (vertex, other), m, samples, mean, var, 64.0 * m, tb, tf)


# ---------------------------------------------------------------------------
# Exact-versus-limit convergence


@dataclass
class ConvergenceRow:
    n: int
    supnorm: float
    central_location: tuple
    central_value: float
    central_target: float

    @property
    def central_dev(self) -> float:
        return abs(self.central_value - self.central_target)


def _masked_locations(n: int, bias, taxicab: float, margin: float):
    p = 0.5 if bias is None else float(Fraction(bias))
    singulars = ((p, 1 - p), (-p, 1 - p))
    for ell, m in exactcore.north_locations(n):
        x, y = ell / n, m / n
        if abs(x) + abs(y) > taxicab:
            continue
        if min(math.hypot(x - sx, y - sy) for sx, sy in singulars) < margin:
            continue
        yield ell, m, x, y


def convergence_report(
    orders: Sequence[int],
    bias=None,
    taxicab: float = 0.8,
    margin: float = 0.1,
) -> list:
    """Sup-norm distance between exact placement probabilities and the
    limiting formula over the masked grid, plus the deviation of the
    exact value at the lattice point nearest the origin from the central
    limit value (1/4 in the uniform case)."""
    rows = []
    p = None if bias is None else Fraction(bias)
    for n in orders:
        grid = exactcore.placement_grid(n, bias=p)
        sup = 0.0
        for ell, m, x, y in _masked_locations(n, bias, taxicab, margin):
            if p is None:
                limit = asymptotics.arctan_placement(x, y)
            else:
                limit = asymptotics.biased_arctan_placement(x, y, float(p))
            sup = max(sup, abs(grid.float(ell, m) - limit))
        ell0, m0 = asymptotics.nearest_lattice_location(0.0, 0.0, n)
        if p is None:
            target = asymptotics.arctan_placement(0.0, 0.0)
        else:
            target = asymptotics.biased_arctan_placement(0.0, 0.0, float(p))
        rows.append(
            ConvergenceRow(
                n=n,
                supnorm=sup,
                central_location=(ell0, m0),
                central_value=grid.float(ell0, m0),
                central_target=target,
            )
        )
    return rows


def convergence_csv(rows: Iterable[ConvergenceRow]) -> str:
    lines = ["n,supnorm,central_ell,central_m,central_dev"]
    for r in rows:
        lines.append(
            f"{r.n},{r.supnorm:.12g},{r.central_location[0]},{r.central_location[1]},{r.central_dev:.12g}"
        )
    return "\n".join(lines) + "\n"


def mean_height_error(
    n: int,
    samples: int,
    seed: int,
    circle_margin: float = 0.1,
) -> float:
    """Sup-norm distance between the empirical mean normalized height
    field and its limit, over diamond vertices at least `circle_margin`
    (in normalized radius) away from the arctic circle."""
    total = np.zeros((2 * n + 1, 2 * n + 1), dtype=np.int64)
    for i in range(samples):
        total += height_grid(shuffle.sample_canon(n, seed + i), n)
    meanh = total / (samples * n)
    vy, vx = np.mgrid[-n : n + 1, -n : n + 1]
    x = vx / n
    y = vy / n
    sel = vertex_mask(n) & (np.abs(vx) + np.abs(vy) <= n)
    sel &= np.abs(np.hypot(x, y) - math.sqrt(0.5)) >= circle_margin
    worst = 0.0
    for iy, ix in zip(*np.nonzero(sel)):
        limit = asymptotics.average_height(x[iy, ix], y[iy, ix])
        worst = max(worst, abs(meanh[iy, ix] - limit))
    return worst


def chi_square_pvalue(observed: Sequence[int], expected_probs: Sequence[float]) -> float:
    """Chi-square goodness-of-fit p-value of observed counts against the
    expected distribution."""
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected_probs, dtype=float) * obs.sum()
    chi2 = float(((obs - exp) ** 2 / exp).sum())
    dof = len(obs) - 1
    return float(scipy_stats.chi2.sf(chi2, dof))
