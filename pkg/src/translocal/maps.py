"""Catalogue of dynamical systems behind one uniform evaluation interface.

Every system evaluates vectorized on coordinate arrays of shape (N, d); 1D
systems additionally expose log|f'| pointwise, toral systems their integer
matrix.  Branch endpoints are left-closed: the endpoint belongs to the branch
starting there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import spaces
from .errors import (HorizonExceededError, SingularOrbitError,
                     SpaceMismatchError)
from .spaces import CIRCLE, DISK, INTERVAL, SYMBOLIC, TORUS, Point

DEFAULT_HORIZON = 100_000
STAIRCASE_LEVEL_CAP = 12


@dataclass(frozen=True)
class System:
    """A catalogue dynamical system.

    `step_many` maps an (N, d) coordinate array one iterate forward (already
    reduced into the phase space).  `log_slope_many`, present for 1D systems
    with a derivative rule, returns log|f'| at each coordinate.
    `affine_branches` lists (lo, hi, slope, intercept) for piecewise-affine
    1D maps (used for exact preimage computations).
    """

    name: str
    space: str
    dim: int
    step_many: Callable[[np.ndarray], np.ndarray] | None = None
    log_slope_many: Callable[[np.ndarray], np.ndarray] | None = None
    breakpoints: tuple = ()
    matrix: tuple | None = None
    h_top: float | None = None
    alphabet: int | None = None
    horizon: int = DEFAULT_HORIZON
    max_log_slope: float | None = None

    @property
    def affine_branches(self):
        return _AFFINE_BRANCHES.get(self.name)


def evaluate(sys: System, x: Point) -> Point:
    """One application of the map, reduced into the phase space."""
    if x.space != sys.space:
        raise SpaceMismatchError(f"point in {x.space!r}, system on {sys.space!r}")
    if sys.space == SYMBOLIC:
        if len(x.word) < 1:
            raise HorizonExceededError("cannot shift an empty word")
        return Point(SYMBOLIC, word=x.word[1:])
    out = sys.step_many(np.asarray([x.coords], dtype=float))[0]
    return Point(sys.space, tuple(float(v) for v in out))


def orbit(sys: System, x: Point, n: int) -> list[Point]:
    """[x, f(x), ..., f^(n-1)(x)]; n must be >= 1 and within the horizon."""
    if n < 1:
        raise ValueError("orbit length must be >= 1")
    if n > sys.horizon:
        raise HorizonExceededError(f"orbit length {n} exceeds horizon {sys.horizon}")
    pts = [x]
    for _ in range(n - 1):
        pts.append(evaluate(sys, pts[-1]))
    return pts


def orbit_coords(sys: System, coords: np.ndarray, n: int) -> np.ndarray:
    """Stacked orbit segments: result[:, j] = f^j(coords), shape (N, n, d)."""
    if n > sys.horizon:
        raise HorizonExceededError(f"orbit length {n} exceeds horizon {sys.horizon}")
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    out = np.empty((coords.shape[0], n, coords.shape[1]))
    cur = coords
    for j in range(n):
        out[:, j] = cur
        if j + 1 < n:
            cur = sys.step_many(cur)
    return out


def log_derivative_sum(sys: System, x: Point, n: int) -> float:
    """Chain-rule sum log|Df^n(x)| = sum_{j<n} log|f'(f^j x)|."""
    if sys.log_slope_many is None:
        raise ValueError(f"system {sys.name!r} has no derivative rule")
    total = 0.0
    cur = x
    for _ in range(n):
        c = cur.coords[0]
        for b in sys.breakpoints:
            if abs(c - b) < 1e-12 and not _differentiable_at(sys, b):
                raise SingularOrbitError(
                    f"orbit of {x.coords} hits branch endpoint {b}")
        total += float(sys.log_slope_many(np.asarray([c]))[0])
        cur = evaluate(sys, cur)
    return total


def _differentiable_at(sys: System, b: float) -> bool:
    # Probe one-sided slopes; endpoints with matching slopes are fine.
    h = 1e-9
    left = sys.log_slope_many(np.asarray([(b - h) % 1.0 if sys.space == CIRCLE
                                          else max(b - h, 0.0)]))[0]
    right = sys.log_slope_many(np.asarray([b]))[0]
    return bool(np.isfinite(left) and np.isfinite(right)
                and abs(left - right) < 1e-6)


def toral_eigen_data(sys: System) -> list[tuple[float, int]]:
    """Eigenvalue moduli with algebraic multiplicities, descending."""
    if sys.matrix is None:
        raise ValueError(f"system {sys.name!r} is not toral")
    a = np.asarray(sys.matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("toral matrix must be square")
    if not np.allclose(a, np.round(a)):
        raise ValueError("toral matrix must have integer entries")
    moduli = sorted(np.abs(np.linalg.eigvals(a)), reverse=True)
    grouped: list[tuple[float, int]] = []
    for m in moduli:
        if grouped and abs(grouped[-1][0] - m) < 1e-9:
            grouped[-1] = (grouped[-1][0], grouped[-1][1] + 1)
        else:
            grouped.append((float(m), 1))
    return grouped


# ---------------------------------------------------------------------------
# Catalogue maps
# ---------------------------------------------------------------------------

def _tripling_step(x):
    return (3.0 * x) % 1.0


def _g_step(x):
    y = np.where(x < 0.5, 2.0 * x, np.where(x < 0.75, 4.0 * x - 2.0, 4.0 * x - 3.0))
    return y % 1.0


def _g_log_slope(x):
    return np.where(x < 0.5, math.log(2.0), math.log(4.0))


def _pm_step(x):
    x = x[..., 0] if x.ndim > 1 else x
    y = np.where(x < 0.5, x / (1.0 - x), 2.0 * x - 1.0)
    return np.clip(y, 0.0, 1.0)


def _pm_log_slope(x):
    return np.where(x < 0.5, -2.0 * np.log1p(-x), math.log(2.0))


def _sqrt_step(x):
    y = np.where(x < 0.5, np.sqrt(2.0 * x), 2.0 * x - 1.0)
    return np.clip(y, 0.0, 1.0)


def _sqrt_log_slope(x):
    with np.errstate(divide="ignore"):
        return np.where(x < 0.5, -0.5 * np.log(2.0 * x), math.log(2.0))


def _staircase_level(x):
    # x in (2^-n, 2^(1-n)] has level n; exact powers of two sit at the top
    # of their own interval.
    with np.errstate(divide="ignore"):
        return np.floor(-np.log2(np.maximum(x, 1e-300))).astype(int) + 1


def _staircase_step(x):
    flat = x[..., 0] if x.ndim > 1 else x
    n = _staircase_level(flat)
    frozen = (n > STAIRCASE_LEVEL_CAP) | (flat <= 0.0)
    n = np.clip(n, 1, STAIRCASE_LEVEL_CAP)
    base = np.power(2.0, -n.astype(float))
    laps = 2 * n + 1
    t = np.clip((flat - base) / base, 0.0, 1.0)
    s = t * laps
    j = np.clip(np.ceil(s) - 1, 0, laps - 1).astype(int)
    frac = s - j
    y = np.where(j % 2 == 0, frac, 1.0 - frac)
    out = base * (1.0 + y)
    return np.where(frozen, flat, out)


def _staircase_log_slope(x):
    n = np.clip(_staircase_level(np.maximum(x, 1e-300)), 1, STAIRCASE_LEVEL_CAP)
    return np.log(2.0 * n + 1.0)


def _disk_step(c):
    r, t = c[:, 0], c[:, 1]
    return np.stack([r * (2.0 - r), (3.0 * t) % (2.0 * math.pi)], axis=1)


def _wrap_1d(fn):
    def step(c):
        return fn(c[:, 0]).reshape(-1, 1)
    return step


def _slope_1d(fn):
    def slope(c):
        c = np.asarray(c, dtype=float)
        return fn(c[..., 0] if c.ndim > 1 else c)
    return slope


def _toral_step(matrix):
    a = np.asarray(matrix, dtype=float)

    def step(c):
        return (c @ a.T) % 1.0

    return step


_AFFINE_BRANCHES = {
    "tripling": ((0.0, 1 / 3, 3.0, 0.0), (1 / 3, 2 / 3, 3.0, -1.0),
                 (2 / 3, 1.0, 3.0, -2.0)),
    "g3branch": ((0.0, 0.5, 2.0, 0.0), (0.5, 0.75, 4.0, -2.0),
                 (0.75, 1.0, 4.0, -3.0)),
}


def _catalogue() -> dict[str, System]:
    log3 = math.log(3.0)
    systems = {
        "tripling": System(
            name="tripling", space=CIRCLE, dim=1,
            step_many=_wrap_1d(_tripling_step),
            log_slope_many=_slope_1d(lambda x: np.full_like(x, log3)),
            breakpoints=(0.0, 1 / 3, 2 / 3),
            h_top=log3, max_log_slope=log3,
        ),
        "g3branch": System(
            name="g3branch", space=CIRCLE, dim=1,
            step_many=_wrap_1d(_g_step),
            log_slope_many=_slope_1d(_g_log_slope),
            breakpoints=(0.0, 0.5, 0.75),
            h_top=log3, max_log_slope=math.log(4.0),
        ),
        "pomeau-manneville": System(
            name="pomeau-manneville", space=INTERVAL, dim=1,
            step_many=_wrap_1d(_pm_step),
            log_slope_many=_slope_1d(_pm_log_slope),
            breakpoints=(0.5,),
            h_top=math.log(2.0), max_log_slope=math.log(4.0),
        ),
        "sqrtmap": System(
            name="sqrtmap", space=INTERVAL, dim=1,
            step_many=_wrap_1d(_sqrt_step),
            log_slope_many=_slope_1d(_sqrt_log_slope),
            breakpoints=(0.5,),
            h_top=math.log(2.0), max_log_slope=None,
        ),
        "staircase": System(
            name="staircase", space=INTERVAL, dim=1,
            step_many=_wrap_1d(_staircase_step),
            log_slope_many=_slope_1d(_staircase_log_slope),
            breakpoints=(),
            h_top=None, max_log_slope=math.log(2 * STAIRCASE_LEVEL_CAP + 1),
        ),
        "disk": System(
            name="disk", space=DISK, dim=2,
            step_many=_disk_step,
            h_top=log3, max_log_slope=log3,
        ),
        "identity": System(
            name="identity", space=CIRCLE, dim=1,
            step_many=_wrap_1d(lambda x: x),
            log_slope_many=_slope_1d(lambda x: np.zeros_like(x)),
            h_top=0.0, max_log_slope=0.0,
        ),
    }
    return systems


_CATALOGUE = _catalogue()

CAT_MATRIX = ((2, 1), (1, 1))


def get_system(spec_id: str) -> System:
    """Resolve a string identifier into a System.

    Parameterized ids: toral:<matrix>, fullshift:<k>, iterate:<id>:<R>.
    The matrix literal is rows separated by ';' with ',' separated entries,
    e.g. "toral:2,1;1,1" for the cat map.
    """
    if spec_id in _CATALOGUE:
        return _CATALOGUE[spec_id]
    if spec_id == "cat":
        return get_system("toral:2,1;1,1")
    if spec_id.startswith("toral:"):
        rows = tuple(tuple(int(v) for v in row.split(","))
                     for row in spec_id[len("toral:"):].split(";"))
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise ValueError(f"non-square toral matrix in {spec_id!r}")
        top = float(sum(math.log(m) * mult
                        for m, mult in _eig_groups(rows) if m > 1.0))
        return System(name=spec_id, space=TORUS, dim=d,
                      step_many=_toral_step(rows), matrix=rows, h_top=top)
    if spec_id.startswith("fullshift:"):
        k = int(spec_id.split(":", 1)[1])
        if k < 2:
            raise ValueError("full shift needs at least 2 symbols")
        return System(name=spec_id, space=SYMBOLIC, dim=1,
                      alphabet=k, h_top=math.log(k))
    if spec_id.startswith("iterate:"):
        _, base_id, r = spec_id.split(":")
        return iterate_system(get_system(base_id), int(r))
    raise KeyError(f"unknown system id {spec_id!r}")


def _eig_groups(rows):
    a = np.asarray(rows, dtype=float)
    moduli = sorted(np.abs(np.linalg.eigvals(a)), reverse=True)
    out = []
    for m in moduli:
        if out and abs(out[-1][0] - m) < 1e-9:
            out[-1][1] += 1
        else:
            out.append([float(m), 1])
    return [(m, mult) for m, mult in out]


def iterate_system(sys: System, r: int) -> System:
    """The map f^r, sharing f's phase space."""
    if r < 1:
        raise ValueError("iterate count must be >= 1")
    if sys.space == SYMBOLIC:
        raise ValueError("iterate shifts by composing evaluate calls instead")

    def step(c):
        for _ in range(r):
            c = sys.step_many(c)
        return c

    log_slope = None
    if sys.log_slope_many is not None:
        def log_slope(c):  # noqa: F811 - deliberate rebind
            c = np.atleast_2d(np.asarray(c, dtype=float))
            total = np.zeros(c.shape[0])
            cur = c
            for _ in range(r):
                total += sys.log_slope_many(cur)
                cur = sys.step_many(cur)
            return total

    matrix = None
    if sys.matrix is not None:
        matrix = tuple(tuple(int(v) for v in row) for row in
                       np.linalg.matrix_power(np.asarray(sys.matrix, dtype=int), r))
    return System(
        name=f"{sys.name}^{r}", space=sys.space, dim=sys.dim,
        step_many=step, log_slope_many=log_slope,
        breakpoints=sys.breakpoints, matrix=matrix,
        h_top=None if sys.h_top is None else r * sys.h_top,
        alphabet=sys.alphabet, horizon=sys.horizon,
        max_log_slope=None if sys.max_log_slope is None else r * sys.max_log_slope,
    )


def catalogue_ids() -> list[str]:
    return sorted(_CATALOGUE) + ["toral:<matrix>", "fullshift:<k>",
                                 "codedshift:<family>"]


# ---------------------------------------------------------------------------
# Monotone branch decompositions (1D maps)
#
# Every 1D catalogue map is a union of continuous monotone branches, each
# mapping its domain interval onto a canonical interval ("unit" = [0, 1],
# ("band", m) = [2^-m, 2^(1-m)] for the staircase, "frozen" for its frozen
# tail).  This supports exact image-variation computations with no sampling.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    lo: float
    hi: float
    fn: Callable[[float], float]
    canonical: tuple


def _affine_fn(slope, intercept):
    return lambda x: slope * x + intercept


def monotone_branches(sys: System, lo: float, hi: float) -> list:
    """Monotone continuous branches of `sys` intersecting [lo, hi]."""
    name = sys.name
    if name in _AFFINE_BRANCHES:
        return [Branch(a, b, _affine_fn(s, i), ("unit",))
                for a, b, s, i in _AFFINE_BRANCHES[name]
                if b > lo and a < hi]
    if name == "pomeau-manneville":
        table = [Branch(0.0, 0.5, lambda x: x / (1.0 - x), ("unit",)),
                 Branch(0.5, 1.0, _affine_fn(2.0, -1.0), ("unit",))]
        return [b for b in table if b.hi > lo and b.lo < hi]
    if name == "sqrtmap":
        table = [Branch(0.0, 0.5, lambda x: math.sqrt(2.0 * x), ("unit",)),
                 Branch(0.5, 1.0, _affine_fn(2.0, -1.0), ("unit",))]
        return [b for b in table if b.hi > lo and b.lo < hi]
    if name == "identity":
        return [Branch(0.0, 1.0, lambda x: x, ("unit",))]
    if name == "staircase":
        return _staircase_branches(lo, hi)
    raise KeyError(f"no branch table for system {name!r}")


def _staircase_lap_fn(base, laps, j):
    def fn(x):
        s = (x - base) / base * laps - j
        y = s if j % 2 == 0 else 1.0 - s
        return base * (1.0 + y)
    return fn


def _staircase_branches(lo: float, hi: float) -> list:
    out = []
    floor_cut = 2.0 ** (-STAIRCASE_LEVEL_CAP)
    if lo < floor_cut:
        out.append(Branch(0.0, floor_cut, lambda x: x, ("frozen",)))
    for m in range(1, STAIRCASE_LEVEL_CAP + 1):
        base = 2.0 ** (-m)
        if 2.0 * base <= lo or base >= hi:
            continue
        laps = 2 * m + 1
        width = base / laps
        for j in range(laps):
            a = base + j * width
            b = base + (j + 1) * width
            if b > lo and a < hi:
                out.append(Branch(a, b, _staircase_lap_fn(base, laps, j),
                                  ("band", m)))
    out.sort(key=lambda br: br.lo)
    return out


def canonical_growth(sys: System, canonical: tuple, k: int) -> float:
    """Image variation of f^k over a canonical full domain."""
    if k < 0:
        raise ValueError("negative iterate count")
    kind = canonical[0]
    if kind == "frozen":
        return 2.0 ** (-STAIRCASE_LEVEL_CAP)
    if kind == "band":
        m = canonical[1]
        return (2 * m + 1) ** k * 2.0 ** (-m)
    if kind == "unit":
        if sys.name == "staircase":
            # [0, 1] splits into the bands plus the frozen tail
            total = 2.0 ** (-STAIRCASE_LEVEL_CAP)
            for m in range(1, STAIRCASE_LEVEL_CAP + 1):
                total += (2 * m + 1) ** k * 2.0 ** (-m)
            return total
        deg = len(monotone_branches(sys, 0.0, 1.0))
        return float(deg) ** k
    raise KeyError(f"unknown canonical domain {canonical!r}")


# ---------------------------------------------------------------------------
# Potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Potential:
    """Continuous potential: zero, constant(c), geometric(t) = -t*log|f'|,
    or a lookup table on a 1D grid (linearly interpolated)."""

    kind: str = "zero"
    c: float = 0.0
    t: float = 1.0
    table_x: tuple = ()
    table_y: tuple = ()

    def values(self, sys: System, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        flat = coords[..., 0] if coords.ndim > 1 else coords
        if self.kind == "zero":
            return np.zeros_like(flat)
        if self.kind == "constant":
            return np.full_like(flat, self.c)
        if self.kind == "geometric":
            if sys.log_slope_many is None:
                raise ValueError("geometric potential needs a derivative rule")
            return -self.t * sys.log_slope_many(coords)
        if self.kind == "table":
            return np.interp(flat, self.table_x, self.table_y)
        raise ValueError(f"unknown potential kind {self.kind!r}")


ZERO_POTENTIAL = Potential("zero")


def get_potential(spec_id: str) -> Potential:
    if spec_id in ("zero", "0"):
        return ZERO_POTENTIAL
    if spec_id.startswith("constant:"):
        return Potential("constant", c=float(spec_id.split(":", 1)[1]))
    if spec_id.startswith("geometric:"):
        return Potential("geometric", t=float(spec_id.split(":", 1)[1]))
    raise KeyError(f"unknown potential id {spec_id!r}")


def birkhoff_sum(pot: Potential, sys: System, x: Point, n: int) -> float:
    """sum_{m<n} phi(f^m x)."""
    if pot.kind == "zero":
        return 0.0
    if pot.kind == "constant":
        return pot.c * n
    if sys.space == SYMBOLIC:
        raise ValueError("non-constant potentials unsupported on shift spaces")
    orb = orbit_coords(sys, np.asarray([x.coords]), n)[0]
    return float(np.sum(pot.values(sys, orb)))
