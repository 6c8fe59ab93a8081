"""The alpha-Bowen metric on one-sided subshifts and its balls.

For ``0 < eps < 1`` every alpha-Bowen ball ``B_n^alpha(x, eps)`` in a subshift
is exactly the cylinder of length

    L(n, alpha, eps) = min{ j : j > (1 + alpha)(n - 1) + ln(1/eps) },

because a first disagreement at ``j < n`` already gives weighted distance
``>= 1 > eps``, and for ``j >= n`` the binding index is ``i = n - 1``.  This
collapses spanning numbers and cover problems to word combinatorics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .symbolic import (
    IncidenceMatrix,
    SymbolicPoint,
    check_point,
    log_word_counts,
)

# relative slack used to decide that (1+alpha)(n-1) + ln(1/eps) is an integer
_SNAP = 1e-9


def _snap_floor(t: float) -> int:
    r = round(t)
    if abs(t - r) <= _SNAP * max(1.0, abs(t)):
        return int(r)
    return math.floor(t)


@dataclass(frozen=True)
class BallSpec:
    n: int
    alpha: float
    eps: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")

    @property
    def log_inv_eps(self) -> float:
        return -math.log(self.eps)

    @property
    def n0(self) -> int:
        """The integer N0 with exp(-(N0+1)) < eps <= exp(-N0)."""
        return _snap_floor(self.log_inv_eps)


def cylinder_length(n: int, alpha: float, eps: float) -> int:
    """L(n, alpha, eps); the boundary case of an exact integer j0 gives j0 + 1."""
    spec = BallSpec(n, alpha, eps)
    t = (1.0 + spec.alpha) * (spec.n - 1) + spec.log_inv_eps
    return _snap_floor(t) + 1


def ball_cylinder_length(spec: BallSpec) -> int:
    return cylinder_length(spec.n, spec.alpha, spec.eps)


@dataclass(frozen=True)
class CylinderLengthTable:
    """n -> L(n, alpha, eps) for n = 1..n_max."""

    alpha: float
    eps: float
    n_max: int
    lengths: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "lengths",
            tuple(cylinder_length(n, self.alpha, self.eps) for n in range(1, self.n_max + 1)),
        )

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise KeyError(n)
        return self.lengths[n - 1]

    def order_of(self, length: int) -> int | None:
        """The n with L(n) == length, if any (L is strictly increasing)."""
        for n, ell in enumerate(self.lengths, start=1):
            if ell == length:
                return n
        return None


# -- the metric ----------------------------------------------------------------

def _next_disagreements(x: SymbolicPoint, y: SymbolicPoint, n: int) -> np.ndarray:
    """D[i] = first index j >= i with x_j != y_j, for i < n (inf if none)."""
    tail_start = max(n, len(x.preperiod), len(y.preperiod))
    p = math.lcm(len(x.period), len(y.period))
    horizon = tail_start + p
    diff = np.flatnonzero(x.prefix(horizon) != y.prefix(horizon))
    out = np.full(n, np.inf)
    if diff.size == 0:
        return out
    idx = np.searchsorted(diff, np.arange(n))
    ok = idx < diff.size
    out[ok] = diff[idx[ok]]
    return out


def alpha_log_distance(x: SymbolicPoint, y: SymbolicPoint, n: int, alpha: float) -> float:
    """log d_n^alpha(x, y) = max_{i<n} ((1+alpha) i - D(i)); -inf when x == y."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = _next_disagreements(x, y, n)
    i = np.arange(n, dtype=float)
    return float(np.max((1.0 + alpha) * i - d))


def alpha_distance(a: IncidenceMatrix, x: SymbolicPoint, y: SymbolicPoint, n: int, alpha: float) -> float:
    """d_n^alpha(x, y) = max_{0<=i<n} e^{alpha i} d(sigma^i x, sigma^i y)."""
    check_point(a, x)
    check_point(a, y)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return math.exp(alpha_log_distance(x, y, n, alpha))


# -- spanning numbers and entropy ------------------------------------------------

def spanning_number_sft(a: IncidenceMatrix, spec: BallSpec) -> float:
    """log r_n(sigma, alpha, Sigma_A^+, eps) = log #(admissible L-words)."""
    ell = ball_cylinder_length(spec)
    return float(log_word_counts(a, ell)[ell - 1])


def richardson(ns: np.ndarray, values: np.ndarray) -> float:
    """Cancel the 1/n term using the estimates at n_max and about n_max/2."""
    n_hi = int(ns[-1])
    j = int(np.argmin(np.abs(ns - n_hi / 2)))
    n_lo = int(ns[j])
    if n_lo == n_hi:
        return float(values[-1])
    return float((n_hi * values[-1] - n_lo * values[j]) / (n_hi - n_lo))


@dataclass(frozen=True)
class EntropySeries:
    ns: np.ndarray
    estimates: np.ndarray
    target: float
    limit: float
    extrapolated: float

    def rows(self):
        for n, e in zip(self.ns, self.estimates):
            yield int(n), float(e), self.target, float(e - self.target)


def alpha_entropy_sft(
    a: IncidenceMatrix,
    alpha: float,
    eps: float,
    n_range: tuple[int, int] = (1, 200),
) -> EntropySeries:
    """(1/n) log #Sigma_A^{L(n)} over ``n_range`` (inclusive).

    ``limit`` is the value at the largest n; ``extrapolated`` removes the
    leading 1/n term.  ``target`` is (1 + alpha) log r(A).
    """
    from .symbolic import spectral_radius

    n_lo, n_hi = n_range
    if not 1 <= n_lo <= n_hi:
        raise ValueError(f"bad n_range {n_range}")
    ns = np.arange(n_lo, n_hi + 1)
    lengths = np.array([cylinder_length(int(n), alpha, eps) for n in ns])
    logs = log_word_counts(a, int(lengths.max()))
    est = logs[lengths - 1] / ns
    target = (1.0 + alpha) * math.log(spectral_radius(a))
    return EntropySeries(ns, est, target, float(est[-1]), richardson(ns, est))


def hausdorff_dimension_sft(
    a: IncidenceMatrix,
    sub=None,
    depth: int = 30,
    tol: float = 1e-6,
    n_max: int | None = None,
) -> float:
    """Critical s where the cylinder-cover value crosses 1 at depth ``depth``.

    ``sub`` is an optional target: a block-presented sub-SFT (labels set),
    a list of forbidden words, or a :class:`Language`.
    """
    from .caratheodory import CoverProblem, critical_exponent
    from .language import as_language

    if depth < 2:
        raise ValueError("depth must be >= 2")
    lang = as_language(a, sub)
    problem = CoverProblem(
        matrix=a, target=lang, s=0.0, mode="hausdorff",
        n_min=depth, n_max=n_max if n_max is not None else depth + 10,
    )
    return critical_exponent(problem, (0.0, math.log(a.k) + 1.0), tol)
