"""Grid-based alpha-entropy estimators for interval, circle and shift maps.

A system is discretized to ``M`` grid points, orbit segments are computed
once, and a greedy pass picks centers in a seeded random order until every
grid point lies within weighted distance ``radius`` of a center.  The centers
are pairwise ``radius``-separated, so their count sits between the minimal
spanning number at ``radius`` and the maximal separated number at ``radius``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import _snap_floor, alpha_entropy_sft, cylinder_length, richardson
from .symbolic import IncidenceMatrix, log_word_counts

ORBIT_BUDGET = 1 << 24
TIE_TOL = 1e-12
DEFAULT_M = 1 << 16


class DegenerateFitError(ValueError):
    pass


class OrbitBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class MetricSystem:
    """A map on [0,1] (``interval``), on R/Z (``circle``), or the one-sided
    binary shift on B-bit truncations (``binary-shift``)."""

    name: str
    space: str
    map: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    log_lip: float
    bits: int = 0             # truncation depth of the binary shift

    def grid(self, m: int) -> np.ndarray:
        if self.space == "binary-shift":
            if m != 1 << self.bits:
                raise ValueError(f"this binary shift was built for M = 2^{self.bits}, got M = {m}")
            return np.arange(m, dtype=np.int64)
        return (np.arange(m) + 0.5) / m

    def spacing(self, m: int) -> float:
        if self.space == "binary-shift":
            return math.exp(-(m.bit_length() - 1))
        return 1.0 / m

    def distance(self, x: np.ndarray, y) -> np.ndarray:
        if self.space == "binary-shift":
            bits = self.bits
            xor = np.bitwise_xor(x, y)
            blen = np.frexp(xor.astype(float))[1]
            return np.where(xor == 0, 0.0, np.exp(-(bits - blen).astype(float)))
        d = np.abs(x - y)
        if self.space == "circle":
            d = np.minimum(d, 1.0 - d)
        return d

    def orbits(self, grid: np.ndarray, n: int) -> np.ndarray:
        if n * grid.size > ORBIT_BUDGET:
            raise OrbitBudgetError(
                f"orbit table of {n} x {grid.size} exceeds the budget of {ORBIT_BUDGET} entries; use a smaller M")
        out = np.empty((n, grid.size), dtype=grid.dtype)
        out[0] = grid
        for i in range(1, n):
            out[i] = self.map(out[i - 1])
        self.check_invariant(out)
        return out

    def check_invariant(self, orbits: np.ndarray) -> None:
        if self.space == "binary-shift":
            return
        lo, hi = float(orbits.min()), float(orbits.max())
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"{self.name} leaves [0, 1] on the grid (range [{lo}, {hi}])")

    def window(self, grid: np.ndarray, idx: int, radius: float) -> np.ndarray:
        """Grid indices whose base distance to grid[idx] may be below ``radius``."""
        m = grid.size
        if self.space == "binary-shift":
            bits = m.bit_length() - 1
            q = _snap_floor(-math.log(radius)) + 1 if radius < 1 else 0
            if q >= bits:
                return np.array([idx])
            if q <= 0:
                return np.arange(m)
            free = bits - q
            start = (idx >> free) << free
            return np.arange(start, start + (1 << free))
        p = grid[idx]
        lo = int(np.searchsorted(grid, p - radius, side="left"))
        hi = int(np.searchsorted(grid, p + radius, side="right"))
        parts = [np.arange(lo, hi)]
        if self.space == "circle":
            if p - radius < 0:
                parts.append(np.arange(int(np.searchsorted(grid, p - radius + 1.0, side="left")), m))
            if p + radius > 1:
                parts.append(np.arange(0, int(np.searchsorted(grid, p + radius - 1.0, side="right"))))
        return np.unique(np.concatenate(parts)) if len(parts) > 1 else parts[0]


def _doubling(x):
    return np.mod(2.0 * x, 1.0)


def _tent(x):
    return 1.0 - np.abs(1.0 - 2.0 * x)


def _identity(x):
    return x.copy()


def make_system(name: str, m: int = DEFAULT_M) -> MetricSystem:
    """Built-in systems: doubling, tent, rotation:<theta>, identity, logistic:<r>, shift."""
    if name == "doubling":
        return MetricSystem(name, "circle", _doubling, math.log(2.0))
    if name == "tent":
        return MetricSystem(name, "interval", _tent, math.log(2.0))
    if name == "identity":
        return MetricSystem(name, "interval", _identity, 0.0)
    if name == "shift":
        if m & (m - 1):
            raise ValueError("the binary shift needs M to be a power of two")
        return MetricSystem(name, "binary-shift", lambda x: np.bitwise_and(2 * x, m - 1), 1.0,
                            m.bit_length() - 1)
    kind, _, arg = name.partition(":")
    if kind == "rotation":
        theta = float(arg) if arg else (math.sqrt(5.0) - 1.0) / 2.0
        return MetricSystem(name, "circle", lambda x: np.mod(x + theta, 1.0), 0.0)
    if kind == "logistic":
        r = float(arg) if arg else 4.0
        if not 0 < r <= 4:
            raise ValueError("logistic parameter must lie in (0, 4]")
        return MetricSystem(name, "interval", lambda x: r * x * (1.0 - x), math.log(max(r, 1.0)))
    raise ValueError(f"unknown system {name!r}")


@dataclass(frozen=True)
class SpanningSet:
    centers: np.ndarray       # grid indices
    n: int
    alpha: float
    radius: float
    m: int

    @property
    def size(self) -> int:
        return int(self.centers.size)

    # the centers are radius-separated, hence span(radius) <= size <= sep(radius)
    separated: bool = True


def greedy_spanning(
    sys: MetricSystem,
    n: int,
    alpha: float,
    radius: float,
    seed: int = 0,
    m: int = DEFAULT_M,
    _cache: dict | None = None,
) -> SpanningSet:
    """Greedy (n, alpha, radius)-spanning subset of the grid."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    grid = sys.grid(m)
    key = (sys.name, m)
    if _cache is not None and key in _cache and _cache[key].shape[0] >= n:
        orbits = _cache[key]
    else:
        orbits = sys.orbits(grid, n)
        if _cache is not None:
            _cache[key] = orbits
    scale = np.exp(alpha * np.arange(n))
    # open ball; exact ties (e.g. integer alpha with radius e^-1) must not round inside
    strict = radius * (1.0 - TIE_TOL)
    order = np.random.default_rng(seed).permutation(m)
    covered = np.zeros(m, dtype=bool)
    centers = []
    for p in order:
        if covered[p]:
            continue
        centers.append(p)
        cand = sys.window(grid, int(p), radius)
        cand = cand[~covered[cand]]
        for i in range(n):
            if cand.size <= 1:
                break
            d = sys.distance(orbits[i, cand], orbits[i, p])
            cand = cand[d * scale[i] < strict]
        covered[cand] = True
        covered[p] = True
    return SpanningSet(np.array(centers, dtype=np.int64), n, float(alpha), float(radius), m)


@dataclass(frozen=True)
class EntropyEstimate:
    ns: np.ndarray
    log_sizes: np.ndarray
    slope: float
    intercept: float
    residual: float
    fit_ns: np.ndarray
    params: dict

    def rows(self):
        for n, v in zip(self.ns, self.log_sizes):
            yield int(n), float(v)


def _fit(ns: np.ndarray, vals: np.ndarray) -> tuple[float, float, float, np.ndarray]:
    """Least-squares slope over the upper half of the n-range."""
    if ns.size < 3:
        raise DegenerateFitError(f"only {ns.size} usable n values; need at least 3 for a fit")
    j = ns.size // 2
    if ns.size - j < 3:
        j = ns.size - 3
    x, y = ns[j:].astype(float), vals[j:]
    (slope, icpt), res, *_ = np.polyfit(x, y, 1, full=True)
    rms = float(np.sqrt(res[0] / x.size)) if res.size else 0.0
    return float(slope), float(icpt), rms, ns[j:]


def valid_ns(sys: MetricSystem, alpha: float, radius_of_n: Callable[[int], float],
             n_range: tuple[int, int], m: int) -> np.ndarray:
    """n values whose analytic ball radius stays at least 4 grid spacings."""
    spacing = sys.spacing(m)
    ok = [n for n in range(n_range[0], n_range[1] + 1)
          if radius_of_n(n) * math.exp(-(n - 1) * (alpha + sys.log_lip)) >= 4 * spacing]
    return np.array(ok, dtype=np.int64)


def _estimate(sys, alpha, radius_of_n, n_range, m, seed, params) -> EntropyEstimate:
    ns = valid_ns(sys, alpha, radius_of_n, n_range, m)
    if ns.size < 3:
        raise DegenerateFitError(
            f"{sys.name}: only {ns.size} n values keep the ball radius above 4 grid spacings; "
            "enlarge M or the radius")
    cache: dict = {}
    sys.orbits(sys.grid(m), int(ns.max()))   # validates the budget before any work
    sizes = np.array([greedy_spanning(sys, int(n), alpha, radius_of_n(int(n)), seed, m, cache).size for n in ns])
    logs = np.log(sizes.astype(float))
    slope, icpt, res, fit_ns = _fit(ns, logs)
    return EntropyEstimate(ns, logs, slope, icpt, res, fit_ns, params)


def alpha_entropy_estimate(
    sys: MetricSystem,
    alpha: float,
    eps: float,
    n_range: tuple[int, int] = (1, 14),
    m: int = DEFAULT_M,
    seed: int = 0,
) -> EntropyEstimate:
    """Slope of log |S_n| against n for greedy (n, alpha, eps)-spanning sets."""
    params = {"system": sys.name, "alpha": alpha, "eps": eps, "n_range": list(n_range), "M": m, "seed": seed}
    return _estimate(sys, alpha, lambda n: eps, n_range, m, seed, params)


# -- neutralized entropy, double limit, ratio probe ---------------------------------

def neutralized_length(n: int, eps: float) -> int:
    """Cylinder length of the Bowen ball B_n(x, e^{-n eps}) in a one-sided shift."""
    return _snap_floor((n - 1) + n * eps) + 1


def neutralized_entropy_estimate(
    system,
    eps: float,
    n_range: tuple[int, int] | None = None,
    m: int = DEFAULT_M,
    seed: int = 0,
) -> EntropyEstimate:
    """Slope of log r_n(X, e^{-n eps}) against n.

    ``system`` is an IncidenceMatrix (exact cylinder counts) or a MetricSystem.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    params = {"eps": eps, "M": m, "seed": seed}
    if isinstance(system, IncidenceMatrix):
        lo, hi = n_range or (1, 200)
        ns = np.arange(lo, hi + 1)
        lengths = np.array([neutralized_length(int(n), eps) for n in ns])
        logs = log_word_counts(system, int(lengths.max()))[lengths - 1]
        slope, icpt, res, fit_ns = _fit(ns, logs)
        params.update(system="sft", n_range=[lo, hi])
        return EntropyEstimate(ns, logs, slope, icpt, res, fit_ns, params)
    n_range = n_range or (1, 14)
    params.update(system=system.name, n_range=list(n_range))
    return _estimate(system, 0.0, lambda n: math.exp(-n * eps), n_range, m, seed, params)


def extrapolate_to_zero(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Intercept at x = 0 of the least-squares line through (xs, ys)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size == 1:
        return float(ys[0])
    return float(np.polyfit(xs, ys, 1)[1])


@dataclass(frozen=True)
class NeutralizedGap:
    eps_grid: tuple[float, ...]
    slopes: tuple[float, ...]
    neutralized: float         # extrapolated to eps -> 0
    alpha: float
    alpha_entropy: float
    gap: float


def neutralized_gap(a: IncidenceMatrix, eps_grid=(0.5, 0.25, 0.125), alpha: float = 1.0,
                    n_range: tuple[int, int] = (1, 200)) -> NeutralizedGap:
    slopes = tuple(neutralized_entropy_estimate(a, e, n_range).slope for e in eps_grid)
    neut = extrapolate_to_zero(eps_grid, slopes)
    ha = alpha_entropy_sft(a, alpha, math.exp(-1.0), n_range).extrapolated
    return NeutralizedGap(tuple(eps_grid), slopes, neut, alpha, ha, ha - neut)


def _cell_estimate(system, alpha: float, eps: float, n: int, m: int, seed: int) -> float:
    if isinstance(system, IncidenceMatrix):
        return alpha_entropy_sft(system, alpha, eps, (1, n)).extrapolated
    return alpha_entropy_estimate(system, alpha, eps, (1, n), m, seed).slope


@dataclass(frozen=True)
class DoubleLimit:
    alpha_grid: tuple[float, ...]
    eps_grid: tuple[float, ...]
    table: np.ndarray          # table[i, j] = h^{alpha_i}(eps_j)
    alpha_limits: np.ndarray   # per eps: extrapolation alpha -> 0
    corner: float              # then eps -> 0
    classical: float           # alpha = 0 at the smallest eps
    ordering_ok: bool          # h^0(eps) <= h^alpha(eps) wherever alpha = 0 is on the grid


def double_limit_experiment(
    system,
    alpha_grid: Sequence[float],
    eps_grid: Sequence[float],
    n: int = 200,
    m: int = DEFAULT_M,
    seed: int = 0,
    slack: float = 1e-9,
) -> DoubleLimit:
    """Table of h^alpha(eps), extrapolated first in alpha then in eps."""
    if not alpha_grid or not eps_grid:
        raise ValueError("alpha and eps grids must be nonempty")
    alphas = tuple(sorted((float(a) for a in alpha_grid), reverse=True))
    epss = tuple(sorted((float(e) for e in eps_grid), reverse=True))
    table = np.array([[_cell_estimate(system, a, e, n, m, seed) for e in epss] for a in alphas])
    alpha_limits = np.array([extrapolate_to_zero(alphas, table[:, j]) for j in range(len(epss))])
    corner = extrapolate_to_zero(epss, alpha_limits)
    base = np.array([_cell_estimate(system, 0.0, e, n, m, seed) for e in epss])
    ordering = bool(np.all(base[None, :] <= table + slack))
    return DoubleLimit(alphas, epss, table, alpha_limits, corner, float(base[-1]), ordering)


@dataclass(frozen=True)
class RatioRow:
    system: str
    alpha: float
    h_alpha: float
    h: float

    @property
    def ratio(self) -> float:
        return self.h_alpha / self.h


def ratio_probe(
    systems: dict,
    alpha_grid: Sequence[float],
    eps: float = 0.2,
    n: int = 200,
    m: int = DEFAULT_M,
    seed: int = 0,
) -> list[RatioRow]:
    """h^alpha / h across named systems (MetricSystem or IncidenceMatrix)."""
    rows = []
    for name, sysm in systems.items():
        if isinstance(sysm, IncidenceMatrix):
            h0 = alpha_entropy_sft(sysm, 0.0, math.exp(-1.0), (1, n)).extrapolated
        else:
            h0 = alpha_entropy_estimate(sysm, 0.0, eps, (1, min(n, 14)), m, seed).slope
        if not h0 > 0:
            raise ValueError(f"{name}: classical entropy estimate is not positive")
        for a in alpha_grid:
            if isinstance(sysm, IncidenceMatrix):
                ha = alpha_entropy_sft(sysm, float(a), math.exp(-1.0), (1, n)).extrapolated
            else:
                ha = h0 if a == 0 else alpha_entropy_estimate(sysm, float(a), eps, (1, min(n, 14)), m, seed).slope
            rows.append(RatioRow(name, float(a), ha, h0))
    return rows
