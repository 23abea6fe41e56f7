"""Closed-form limits of Aztec diamond tiling statistics.

Floating-point evaluation of the limiting placement probability (the
arctangent formula and its biased version), the level-curve ellipses,
the average height function with its tilt and wave-equation structure,
the saddle-point creation-rate estimate, and the inversion that
recovers a position from its tilt.

All the formulas below are limits as the diamond order grows; the exact
module supplies the finite-order values they are tested against.
Normalized coordinates (x, y) = (ell/n, m/n) live in the square
|x| + |y| <= 1; the temperate zone is the open disk x^2 + y^2 < 1/2,
whose boundary circle touches the diamond boundary at the two singular
points (+-1/2, 1/2) where the limit jumps between the frozen values 0
and 1.  Exactly at a singular point the functions here return 1/2,
which is the unique value consistent with the rotation and reflection
identities; within ``SINGULAR_RADIUS`` of one they emit a
``SingularAdjacentWarning`` instead of failing, since the limit theorem
guarantees nothing there.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError, NumericalError

SINGULAR_RADIUS = 0.05

__all__ = [
    "SINGULAR_RADIUS",
    "SingularAdjacentWarning",
    "near_singular",
    "arctan_placement",
    "biased_arctan_placement",
    "directional_placements",
    "biased_directional_placements",
    "average_height",
    "height_tilt",
    "tilt_to_position",
    "wave_kernel",
    "LevelEllipse",
    "level_curve",
    "SaddleData",
    "creation_rate_estimate",
    "biased_creation_rate_envelope",
    "DecayReport",
    "decay_bound_check",
    "nearest_lattice_location",
]


class SingularAdjacentWarning(UserWarning):
    """The queried point lies inside the exclusion radius of a singular
    point, where the limit formula carries no guarantee."""


def _check_point(x: float, y: float) -> None:
    if abs(x) + abs(y) > 1 + 1e-12:
        raise DomainError(f"({x}, {y}) lies outside the normalized diamond")


def near_singular(x: float, y: float, bias: float = 0.5, radius: float = SINGULAR_RADIUS) -> bool:
    """Whether (x, y) is within the exclusion radius of a singular point
    ((+-p, 1-p) under bias p)."""
    return min(math.hypot(x - bias, y - (1 - bias)), math.hypot(x + bias, y - (1 - bias))) < radius


def _warn_if_singular(x: float, y: float, bias: float = 0.5) -> None:
    if near_singular(x, y, bias):
        warnings.warn(
            f"({x:.4f}, {y:.4f}) is singular-adjacent; the limit formula "
            "carries no uniform guarantee here",
            SingularAdjacentWarning,
            stacklevel=3,
        )


def arctan_placement(x: float, y: float) -> float:
    """Limiting north-going placement probability at normalized (x, y).

    Frozen regions: 0 on and outside the circle below the singular
    height, 1 above it; inside the circle the arctangent formula.
    """
    _check_point(x, y)
    _warn_if_singular(x, y)
    r2 = x * x + y * y
    if 2 * r2 >= 1:
        if y == 0.5 and x * x >= 0.25:
            # the two tangency points; 1/2 keeps the exact identities
            return 0.5 if x * x == 0.25 else 0.0
        return 1.0 if y > 0.5 else 0.0
    return 0.5 + math.atan2(2 * y - 1, math.sqrt(1 - 2 * r2)) / math.pi


def biased_arctan_placement(x: float, y: float, bias: float) -> float:
    """Limiting north-going placement probability under bias p.

    The temperate zone becomes the ellipse x^2/p + y^2/(1-p) < 1 and the
    singular points move to (+-p, 1-p); p = 1/2 recovers
    ``arctan_placement``.
    """
    p = float(bias)
    if not 0 < p < 1:
        raise DomainError("bias must lie strictly between 0 and 1")
    _check_point(x, y)
    _warn_if_singular(x, y, bias=p)
    e = x * x / p + y * y / (1 - p)
    if e >= 1:
        if y == 1 - p and x * x >= p * p:
            return 0.5 if x * x == p * p else 0.0
        return 1.0 if y > 1 - p else 0.0
    return 0.5 + math.atan2(y - (1 - p), math.sqrt(p - p * p - (1 - p) * x * x - p * y * y)) / math.pi


def directional_placements(x: float, y: float) -> tuple:
    """(north, east, south, west) limiting placement probabilities near
    (x, y); they sum to 1."""
    return (
        arctan_placement(x, y),
        arctan_placement(-y, x),
        arctan_placement(-x, -y),
        arctan_placement(y, -x),
    )


def biased_directional_placements(x: float, y: float, bias: float) -> tuple:
    """Biased (north, east, south, west); the vertical classes take the
    complementary bias."""
    p = float(bias)
    return (
        biased_arctan_placement(x, y, p),
        biased_arctan_placement(-y, x, 1 - p),
        biased_arctan_placement(-x, -y, p),
        biased_arctan_placement(y, -x, 1 - p),
    )


def average_height(x: float, y: float) -> float:
    """Limit of the normalized average height function.

    2 (y P(x,y) - y P(-x,-y) + (1-x) P(-y,x) + (1+x) P(y,-x)); equals the
    piecewise-linear trace 2 - 2|x| on the boundary |x| + |y| = 1.
    """
    pn, pe, ps, pw = directional_placements(x, y)
    return 2.0 * (y * (pn - ps) + (1 - x) * pe + (1 + x) * pw)


class Tilt(NamedTuple):
    s: float  # dH/dx
    t: float  # dH/dy


def height_tilt(x: float, y: float) -> Tilt:
    """Gradient of the average height function: (2 pw - 2 pe, 2 pn - 2 ps)."""
    pn, pe, ps, pw = directional_placements(x, y)
    return Tilt(2.0 * (pw - pe), 2.0 * (pn - ps))


def _tilt_jacobian(x: float, y: float) -> tuple:
    """Analytic Jacobian d(s,t)/d(x,y) inside the temperate zone.

    t(x, y) differentiates in closed form; s(x, y) = -t(y, x), so its
    partials are the same expressions with the axes swapped.
    """
    rd = math.sqrt(1 - 2 * x * x - 2 * y * y)  # symmetric in x, y

    def dt_dv(u, v):
        return (2 / math.pi) * (
            (1 - 2 * u * u + v) / (rd * ((1 + v) ** 2 - u * u))
            + (1 - 2 * u * u - v) / (rd * ((1 - v) ** 2 - u * u))
        )

    def dt_du(u, v):
        return (2 / math.pi) * (
            u * (2 * v + 1) / (rd * ((1 + v) ** 2 - u * u))
            + u * (2 * v - 1) / (rd * ((1 - v) ** 2 - u * u))
        )

    return -dt_dv(y, x), -dt_du(y, x), dt_du(x, y), dt_dv(x, y)


_SEED_GRID: list = []


def _seed_table():
    if not _SEED_GRID:
        steps = 21
        for i in range(1, steps):
            for j in range(1, steps):
                x = -0.7 + 1.4 * i / steps
                y = -0.7 + 1.4 * j / steps
                if x * x + y * y < 0.49:
                    s, t = height_tilt(x, y)
                    _SEED_GRID.append((s, t, x, y))
    return _SEED_GRID


def tilt_to_position(s: float, t: float, tol: float = 1e-11, max_iter: int = 80) -> tuple:
    """The unique temperate-zone point whose height tilt is (s, t).

    Damped Newton iteration with the analytic Jacobian, seeded from a
    coarse precomputed tilt table (which also fixes the right quadrant,
    since sign(x) = -sign(s) and sign(y) = sign(t)).
    """
    if abs(s) + abs(t) >= 2:
        raise DomainError("tilts of temperate-zone points satisfy |s| + |t| < 2")
    x, y = min(_seed_table(), key=lambda row: (row[0] - s) ** 2 + (row[1] - t) ** 2)[2:]
    fs, ft = height_tilt(x, y)
    err = (fs - s) ** 2 + (ft - t) ** 2
    for _ in range(max_iter):
        if err < tol * tol:
            return x, y
        s_x, s_y, t_x, t_y = _tilt_jacobian(x, y)
        det = s_x * t_y - s_y * t_x
        if det == 0:
            raise NumericalError("singular Jacobian in tilt inversion")
        rs, rt = fs - s, ft - t
        dx = (rs * t_y - rt * s_y) / det
        dy = (rt * s_x - rs * t_x) / det
        step = 1.0
        while step > 1e-6:
            nx, ny = x - step * dx, y - step * dy
            if nx * nx + ny * ny < 0.4999999:
                nfs, nft = height_tilt(nx, ny)
                nerr = (nfs - s) ** 2 + (nft - t) ** 2
                if nerr < err:
                    x, y, fs, ft, err = nx, ny, nfs, nft, nerr
                    break
            step *= 0.5
        else:
            break
    if err >= tol * tol:
        raise NumericalError(f"tilt inversion stalled at residual {math.sqrt(err):.3e}")
    return x, y


def wave_kernel(x: float, y: float, t: float) -> float:
    """Fundamental solution of u_tt = (u_xx + u_yy)/2 with a delta
    initial velocity: 1/(pi sqrt(t^2 - 2x^2 - 2y^2)) inside the cone,
    0 outside, +inf exactly on it."""
    if t <= 0:
        raise DomainError("wave kernel is defined for t > 0")
    disc = t * t - 2 * x * x - 2 * y * y
    if disc < 0:
        return 0.0
    if disc == 0:
        return math.inf
    return 1.0 / (math.pi * math.sqrt(disc))


@dataclass(frozen=True)
class LevelEllipse:
    """Level set {P = level} U {P = 1 - level}: the zero set of
    mix*(2x^2+2y^2-1) + (1-mix)*(2y-1)^2, an ellipse through the two
    singular points."""

    level: float
    mix: float

    def implicit(self, x: float, y: float) -> float:
        return self.mix * (2 * x * x + 2 * y * y - 1) + (1 - self.mix) * (2 * y - 1) ** 2

    def points(self, count: int = 256) -> list:
        """Sample points of the curve inside the closed diamond."""
        lam = self.mix
        if lam == 0:
            return [(-0.5 + i / (count - 1), 0.5) for i in range(count)]
        y0 = (1 - lam) / (2 - lam)
        r = (4 - 2 * lam) * y0 * y0 - (1 - 2 * lam)
        ax = math.sqrt(r / (2 * lam))
        ay = math.sqrt(r / (4 - 2 * lam))
        pts = []
        for i in range(count):
            th = 2 * math.pi * i / count
            x = ax * math.cos(th)
            y = y0 + ay * math.sin(th)
            if abs(x) + abs(y) <= 1 + 1e-12:
                pts.append((x, y))
        return pts


def level_curve(p_level: float) -> LevelEllipse:
    """The ellipse carrying the level sets p_level and 1 - p_level.

    The mix follows from inverting the arctangent formula:
    T = tan^2(pi (p - 1/2)), mix = T/(1+T); the degenerate mix = 0 at
    p = 1/2 is the segment y = 1/2, and mix -> 1 recovers the inscribed
    circle.
    """
    if not 0 < p_level < 1:
        raise DomainError("level must lie strictly between 0 and 1")
    t = math.tan(math.pi * (p_level - 0.5)) ** 2
    lam = t / (1 + t)
    return LevelEllipse(level=p_level, mix=lam)


# ---------------------------------------------------------------------------
# Saddle-point creation-rate estimate


class SaddleData(NamedTuple):
    z1: complex      # critical point on |z|^2 = (1+u)/(1-u)
    envelope: float  # 4 / (pi sqrt(n^2 - 2 ell^2 - 2 m^2))
    phase: float     # principal-branch phase, meaningful through cos^2
    estimate: float  # envelope * cos(phase)^2


def creation_rate_estimate(ell: int, m: int, order: int) -> SaddleData:
    """Saddle-point estimate of Cr(ell, m; order) strictly inside the
    arctic circle.

    With n = order - 1, u = (ell+m)/n and v = (ell-m)/n, the critical
    point is z1 = (-v + i sqrt(1 - u^2 - v^2))/(1 - u) and the phase is
    Im(log f(z1) - log z1 - log((log f)''(z1))/2) taken with principal
    branches; the square-root sign ambiguity only shifts the phase by
    pi, which cos^2 absorbs.
    """
    n = order - 1
    if n < 1:
        raise DomainError("order must be >= 2 for the estimate")
    if (ell + m - n) % 2:
        raise DomainError("location violates the parity constraint")
    if 2 * (ell * ell + m * m) >= n * n:
        raise DomainError(
            "point lies on or outside the arctic circle; use decay_bound_check"
        )
    u = (ell + m) / n
    v = (ell - m) / n
    disc = 1.0 - u * u - v * v
    z1 = complex(-v, math.sqrt(disc)) / (1.0 - u)
    a = (ell + m + n) // 2
    b = (ell - m + n) // 2
    log_f2 = -(n - b) / (1 + z1) ** 2 - b / (1 - z1) ** 2 + a / z1**2
    phase = (
        (n - b) * cmath.phase(1 + z1)
        + b * cmath.phase(1 - z1)
        - (a + 1) * cmath.phase(z1)
        - 0.5 * cmath.phase(log_f2)
    )
    envelope = 4.0 / (math.pi * math.sqrt(n * n - 2 * ell * ell - 2 * m * m))
    return SaddleData(z1, envelope, phase, envelope * math.cos(phase) ** 2)


def biased_creation_rate_envelope(ell: int, m: int, order: int, bias: float) -> float:
    """Envelope 2/(pi sqrt((p - p^2) n^2 - (1-p) ell^2 - p m^2)) of the
    biased creation rate inside the arctic ellipse (the biased phase has
    no printed closed form, so only the envelope is exposed)."""
    p = float(bias)
    if not 0 < p < 1:
        raise DomainError("bias must lie strictly between 0 and 1")
    n = order - 1
    if n < 1:
        raise DomainError("order must be >= 2 for the estimate")
    disc = (p - p * p) * n * n - (1 - p) * ell * ell - p * m * m
    if disc <= 0:
        raise DomainError("point lies on or outside the arctic ellipse")
    return 2.0 / (math.pi * math.sqrt(disc))


# ---------------------------------------------------------------------------
# Exponential decay outside the circle


def nearest_lattice_location(x: float, y: float, order: int) -> tuple:
    """Nearest (ell, m) with valid parity inside the order-n diamond."""
    n = order
    ell0, m0 = round(x * n), round(y * n)
    best = None
    for de in (0, 1, -1, 2, -2):
        for dm in (0, 1, -1, 2, -2):
            ell, m = ell0 + de, m0 + dm
            if abs(ell) + abs(m) <= n - 1 and (ell + m - (n - 1)) % 2 == 0:
                d2 = (ell - x * n) ** 2 + (m - y * n) ** 2
                if best is None or d2 < best[0]:
                    best = (d2, ell, m)
    if best is None:
        raise DomainError(f"no valid lattice location near ({x}, {y}) at order {order}")
    return best[1], best[2]


@dataclass(frozen=True)
class DecayReport:
    """Linear fits of log statistics against the diamond order."""

    point: tuple
    orders: tuple
    log_creation: tuple
    creation_slope: float
    creation_r2: float
    defect_kind: str        # 'Pl' (y < 1/2) or '1-Pl' (y > 1/2)
    log_defect: tuple
    defect_slope: float
    defect_r2: float


def _linear_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple:
    nn = len(xs)
    mx = sum(xs) / nn
    my = sum(ys) / nn
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    syy = sum((y - my) ** 2 for y in ys)
    r2 = 1.0 if syy == 0 else (sxy * sxy) / (sxx * syy)
    return slope, r2


def _log_fraction(q) -> float:
    if q <= 0:
        raise DomainError("statistic vanished exactly; no decay rate to fit")
    return math.log(q.numerator) - math.log(q.denominator)


def decay_bound_check(x: float, y: float, orders: Sequence[int]) -> DecayReport:
    """Exponential-decay diagnostics at a normalized point outside the
    arctic circle: fits log Cr, and log Pl (or log(1 - Pl) above the
    singular height), against the order at the nearest lattice points."""
    from . import exactcore

    if x * x + y * y <= 0.5:
        raise DomainError("decay bounds apply outside the circle x^2 + y^2 = 1/2")
    if len(orders) < 3:
        raise DomainError("need at least three orders for a meaningful fit")
    log_cr = []
    log_defect = []
    kind = "1-Pl" if y > 0.5 else "Pl"
    for order in orders:
        ell, m = nearest_lattice_location(x, y, order)
        cr = exactcore.creation_rate(ell, m, order)
        log_cr.append(_log_fraction(cr))
        pl = exactcore.placement_probability(ell, m, order)
        log_defect.append(_log_fraction(1 - pl if kind == "1-Pl" else pl))
    cr_slope, cr_r2 = _linear_fit(list(orders), log_cr)
    df_slope, df_r2 = _linear_fit(list(orders), log_defect)
    return DecayReport(
        point=(x, y),
        orders=tuple(orders),
        log_creation=tuple(log_cr),
        creation_slope=cr_slope,
        creation_r2=cr_r2,
        defect_kind=kind,
        log_defect=tuple(log_defect),
        defect_slope=df_slope,
        defect_r2=df_r2,
    )
