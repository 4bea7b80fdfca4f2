"""Cover-based pressure: weighted Bowen-ball cover sums, critical-exponent
extraction, the shrinking-metric-ball variant, and the two-sided audit
against sampled local pressures.

Minimizing over all covers is intractable; weights are minimized over three
structured families (uniform-n, dyadically refined mixed-n, Vitali-pruned)
and the best value is reported.  Transition detection uses the sign of the
log-weight trend across the N-window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import measures, spaces
from .entropy import DEFAULT_SCHEDULE, Schedule, growth_rate
from .errors import UnbracketedError
from .maps import Potential, System, ZERO_POTENTIAL, orbit_coords
from .spaces import CIRCLE, INTERVAL, Ball, Point

_QUAD_POINTS = 4096
_DEFAULT_DEPTH = 4
_FAMILIES = ("uniform-n", "refined", "vitali-pruned")


@dataclass(frozen=True)
class Region:
    """Finite union of balls and explicit points."""

    balls: tuple = ()
    points: tuple = ()

    def __post_init__(self):
        if not self.balls and not self.points:
            raise ValueError("empty region")

    @property
    def space(self) -> str:
        if self.balls:
            return self.balls[0].center.space
        return self.points[0].space


def whole_circle() -> Region:
    return Region(balls=(Ball(spaces.circle(0.0), 0.5),))


@dataclass(frozen=True)
class CoverWeight:
    value: float
    s: float
    r: float | None                # Bowen-ball radius; None for translocal
    omega: float | None
    N: int
    potential: str
    family: str
    count: float
    n_values: tuple
    sample_centers: tuple = ()


@dataclass(frozen=True)
class CriticalExponent:
    value: float
    bracket: tuple
    variant: str                   # bowen-ball | translocal-upper | translocal-lower
    n_window: tuple


# ---------------------------------------------------------------------------
# Quadrature over 1D intervals
# ---------------------------------------------------------------------------

def _interval_of(ball: Ball, space: str) -> tuple[float, float]:
    c = ball.center.coords[0]
    r = ball.radius
    if space == CIRCLE and r >= 0.5:
        return 0.0, 1.0
    if space == CIRCLE:
        return c - r, c + r          # evaluated mod 1 downstream
    return max(c - r, 0.0), min(c + r, 1.0)


def _segment_data(sys: System, pot: Potential, a: float, b: float, n: int):
    """Midpoint grid with accumulated log-derivative and potential sums."""
    k = _QUAD_POINTS
    xs = (np.linspace(a, b, k, endpoint=False) + (b - a) / (2 * k))
    if sys.space == CIRCLE:
        xs = xs % 1.0
    cur = xs.reshape(-1, 1)
    lam = np.zeros(k)
    phi = np.zeros(k)
    for j in range(n):
        phi += pot.values(sys, cur)
        if j + 1 < n and sys.log_slope_many is not None:
            lam += sys.log_slope_many(cur)
        cur = sys.step_many(cur)
    return xs, lam, phi


def _segment_weight(sys: System, pot: Potential, a: float, b: float, n: int,
                    s: float, ext_of_lam) -> tuple[float, float, np.ndarray]:
    """(weight, ball count, center samples) for a uniform-n cover of [a, b].

    Each sample cell needs spacing/extent balls, where the extent is the
    spatial footprint of one cover ball around that cell.
    """
    xs, lam, phi = _segment_data(sys, pot, a, b, n)
    spacing = (b - a) / xs.shape[0]
    ext = ext_of_lam(lam, n)
    counts = spacing / ext
    total = float(counts.sum())
    if total <= 1.0:
        mid = xs.shape[0] // 2
        return math.exp(-s * n + float(phi[mid])), 1.0, xs[mid:mid + 1]
    weight = float(np.sum(counts * np.exp(-s * n + phi)))
    cum = np.cumsum(counts)
    marks = np.arange(0.5, min(total, 64.0), 1.0)
    centers = xs[np.searchsorted(cum, marks)]
    return weight, total, centers


def _bowen_extent(r: float):
    def ext(lam, n):
        return np.minimum(2.0 * r * np.exp(-lam), 1.0)
    return ext


def _metric_extent(omega: float):
    def ext(lam, n):
        return np.full_like(lam, min(2.0 * math.exp(-omega * n), 1.0))
    return ext


# ---------------------------------------------------------------------------
# Cover weights
# ---------------------------------------------------------------------------

def _region_weight(sys: System, region: Region, pot: Potential, s: float,
                   N: int, ext_of_lam, family: str,
                   depth: int = _DEFAULT_DEPTH) -> tuple[float, float, tuple, tuple]:
    if region.space not in (CIRCLE, INTERVAL) and region.balls:
        raise ValueError(
            f"cover construction implemented for 1D regions, got "
            f"{region.space!r}")
    best = None
    for n_hi in range(N, N + depth + 1):
        total_w = 0.0
        total_c = 0.0
        centers = []
        ns = []
        for ball in region.balls:
            a, b = _interval_of(ball, region.space)
            if family == "refined":
                w, c, cen, nn = _refined_chunks(sys, pot, a, b, N,
                                                n_hi, s, ext_of_lam)
                ns.extend(nn)
            else:
                w, c, cen = _segment_weight(sys, pot, a, b, n_hi, s,
                                            ext_of_lam)
                ns.append(n_hi)
            total_w += w
            total_c += c
            centers.extend(cen.tolist())
        for p in _pruned_points(region.points, family, ext_of_lam, n_hi):
            phi = _point_phi(sys, pot, p, n_hi)
            total_w += math.exp(-s * n_hi + phi)
            total_c += 1.0
            centers.append(p.coords[0] if p.coords else 0.0)
            ns.append(n_hi)
        if best is None or total_w < best[0]:
            best = (total_w, total_c, tuple(centers[:64]), tuple(sorted(set(ns))))
    return best


def _refined_chunks(sys: System, pot: Potential, a: float, b: float,
                    n_lo: int, n_hi: int, s: float, ext_of_lam):
    """Dyadic chunks, each with its own best level in [n_lo, n_hi]."""
    chunks = 8
    edges = np.linspace(a, b, chunks + 1)
    weight = 0.0
    count = 0.0
    centers = []
    ns = []
    for i in range(chunks):
        best = None
        for n in range(n_lo, n_hi + 1):
            w, c, cen = _segment_weight(sys, pot, edges[i], edges[i + 1], n,
                                        s, ext_of_lam)
            if best is None or w < best[0]:
                best = (w, c, cen, n)
        weight += best[0]
        count += best[1]
        centers.extend(best[2].tolist()[:8])
        ns.append(best[3])
    return weight, count, np.asarray(centers), ns


def _pruned_points(points, family: str, ext_of_lam, n: int):
    if family != "vitali-pruned" or len(points) < 2 or not points[0].coords:
        return points
    # drop points already inside the previous kept ball's footprint
    ext = float(ext_of_lam(np.zeros(1), n)[0])
    kept = []
    for p in sorted(points, key=lambda q: q.coords[0]):
        if not kept or abs(p.coords[0] - kept[-1].coords[0]) > ext / 2:
            kept.append(p)
    return tuple(kept)


def _point_phi(sys: System, pot: Potential, p: Point, n: int) -> float:
    from .maps import birkhoff_sum
    return birkhoff_sum(pot, sys, p, n)


def cover_weight(sys: System, region: Region, pot: Potential, s: float,
                 r: float, N: int, family: str | None = None,
                 depth: int = _DEFAULT_DEPTH) -> CoverWeight:
    """Minimal weighted Bowen-ball cover sum over the implemented families."""
    if r <= 0:
        raise ValueError("radius must be positive")
    if N < 1:
        raise ValueError("N must be >= 1")
    fams = (family,) if family else _FAMILIES
    best = None
    for fam in fams:
        w, c, centers, ns = _region_weight(sys, region, pot, s, N,
                                           _bowen_extent(r), fam, depth)
        if best is None or w < best.value:
            best = CoverWeight(w, s, r, None, N, pot.kind, fam, c, ns, centers)
    return best


def translocal_cover_weight(sys: System, region: Region, pot: Potential,
                            s: float, omega: float, N: int,
                            family: str | None = None,
                            depth: int = _DEFAULT_DEPTH) -> CoverWeight:
    """Cover sum with metric balls of radius exp(-omega * n_j)."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if N < 1:
        raise ValueError("N must be >= 1")
    fams = (family,) if family else _FAMILIES
    best = None
    for fam in fams:
        w, c, centers, ns = _region_weight(sys, region, pot, s, N,
                                           _metric_extent(omega), fam, depth)
        if best is None or w < best.value:
            best = CoverWeight(w, s, None, omega, N, pot.kind, fam, c, ns,
                               centers)
    return best


# ---------------------------------------------------------------------------
# Critical exponent
# ---------------------------------------------------------------------------

def _log_weight_trend(weights, variant: str) -> float:
    data = [(w.N, math.log(max(w.value, 1e-300))) for w in weights]
    if variant == "translocal-upper":
        return growth_rate(data, "limsup").value
    if variant == "translocal-lower":
        return growth_rate(data, "liminf").value
    ns = np.array([n for n, _ in data], dtype=float)
    ys = np.array([v for _, v in data])
    a = np.stack([ns, np.ones_like(ns)], axis=1)
    coef, _, _, _ = np.linalg.lstsq(a, ys, rcond=None)
    return float(coef[0])


def critical_exponent(sys: System, region: Region, pot: Potential,
                      r: float | None = None, omega: float | None = None,
                      n_window: tuple = (3, 4, 5, 6, 7, 8),
                      s_grid: tuple = (0.0, 0.4, 0.8, 1.2, 1.6, 2.0),
                      variant: str = "bowen-ball",
                      tol: float = 0.02) -> CriticalExponent:
    """Bisection on s of the sign of the log-weight trend across N."""
    if variant == "bowen-ball" and r is None:
        raise ValueError("bowen-ball variant needs a radius r")
    if variant.startswith("translocal") and omega is None:
        raise ValueError("translocal variants need omega")

    def trend(s: float) -> float:
        ws = []
        for N in n_window:
            if variant == "bowen-ball":
                ws.append(cover_weight(sys, region, pot, s, r, N))
            else:
                ws.append(translocal_cover_weight(sys, region, pot, s,
                                                  omega, N))
        return _log_weight_trend(ws, variant)

    trends = {s: trend(s) for s in s_grid}
    bracket = None
    grid = sorted(s_grid)
    for lo, hi in zip(grid, grid[1:]):
        if trends[lo] > 0.0 and trends[hi] <= 0.0:
            bracket = [lo, hi]
            break
    if bracket is None:
        raise UnbracketedError(
            "no sign change of the cover-weight trend in the s-grid", trends)
    lo, hi = bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if trend(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return CriticalExponent(0.5 * (lo + hi), (lo, hi), variant,
                            (n_window[0], n_window[-1]))


# ---------------------------------------------------------------------------
# Two-sided audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditReport:
    passed: bool
    pressure: float
    bracket: tuple
    sampled_upper: tuple
    sampled_lower: tuple
    tol: float
    variant: str
    details: dict = field(default_factory=dict)

    @property
    def max_upper(self) -> float:
        return max(self.sampled_upper)

    @property
    def min_lower(self) -> float:
        return min(self.sampled_lower)


def _region_samples(region: Region, count: int):
    pts = list(region.points)
    for ball in region.balls:
        space = ball.center.space
        c = ball.center.coords[0]
        offs = np.linspace(-ball.radius, ball.radius, count)
        for o in offs:
            x = (c + o) % 1.0 if space == CIRCLE \
                else min(max(c + o, 0.0), 1.0)
            pts.append(Point(space, (x,)))
    if not pts:
        raise ValueError("empty region sample")
    return pts[:max(count, 1)]


def ma_wen_audit(sys: System, mu: measures.Measure, pot: Potential,
                 region: Region, omega: float | None = None,
                 sample_count: int = 12, tol: float = 0.1,
                 sched: Schedule = DEFAULT_SCHEDULE,
                 r: float = 0.05) -> AuditReport:
    """Check the two-sided relation between the cover pressure of a region
    and local pressures sampled at its points."""
    pts = _region_samples(region, sample_count)
    uppers, lowers = [], []
    for p in pts:
        if omega is None:
            up, lo = measures.local_pressure(sys, mu, pot, p, sched)
        else:
            up, lo = measures.translocal_local_pressure(sys, mu, pot, p,
                                                        omega, sched)
        uppers.append(up.value)
        lowers.append(lo.value)
    base = max(max(uppers), 0.1)
    s_grid = tuple(np.linspace(min(min(lowers) - 0.5, 0.0),
                               base + 0.6, 9))
    if omega is None:
        crit = critical_exponent(sys, region, pot, r=r, s_grid=s_grid)
    else:
        crit = critical_exponent(sys, region, pot, omega=omega,
                                 s_grid=s_grid, variant="translocal-upper")
    p_val = crit.value
    ok = (p_val <= max(uppers) + tol) and (p_val >= min(lowers) - tol)
    return AuditReport(ok, p_val, crit.bracket, tuple(uppers), tuple(lowers),
                       tol, crit.variant,
                       details={"points": len(pts), "omega": omega})
