"""Markov measures on SFTs and alpha-local Brin-Katok entropies."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .geometry import cylinder_length
from .potential import Potential
from .symbolic import IncidenceMatrix, SymbolicPoint


class UnsupportedPointError(ValueError):
    """The point leaves the support of the measure (local entropy is +inf)."""


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    transition: np.ndarray
    stationary: np.ndarray
    matrix: IncidenceMatrix | None = None

    def __post_init__(self):
        p = np.array(self.transition, dtype=float)
        pi = np.array(self.stationary, dtype=float)
        k = p.shape[0]
        if p.shape != (k, k) or pi.shape != (k,):
            raise ValueError("transition must be k x k and stationary of length k")
        if np.any(p < 0) or np.any(pi < 0):
            raise ValueError("probabilities must be nonnegative")
        if np.max(np.abs(p.sum(axis=1) - 1.0)) > 1e-12:
            raise ValueError("transition rows must sum to 1")
        if abs(pi.sum() - 1.0) > 1e-12:
            raise ValueError("stationary vector must sum to 1")
        if np.max(np.abs(pi @ p - pi)) > 1e-10:
            raise ValueError("stationary vector is not invariant")
        if self.matrix is not None:
            if self.matrix.k != k:
                raise ValueError("measure and matrix sizes differ")
            if np.any((p > 0) & (self.matrix.array == 0)):
                raise ValueError("transition support is not inside the incidence matrix")
        p.setflags(write=False)
        pi.setflags(write=False)
        object.__setattr__(self, "transition", p)
        object.__setattr__(self, "stationary", pi)

    @property
    def k(self) -> int:
        return len(self.stationary)

    @classmethod
    def bernoulli(cls, probs: Sequence[float], matrix: IncidenceMatrix | None = None) -> MarkovMeasure:
        q = np.asarray(probs, dtype=float)
        q = q / q.sum()
        return cls(np.tile(q, (len(q), 1)), q, matrix)

    @classmethod
    def from_transition(cls, transition, matrix: IncidenceMatrix | None = None) -> MarkovMeasure:
        """Markov measure with an irreducible transition matrix and its stationary law."""
        p = np.asarray(transition, dtype=float)
        w, v = np.linalg.eig(p.T)
        j = int(np.argmin(np.abs(w - 1.0)))
        pi = np.abs(np.real(v[:, j]))
        return cls(p, pi / pi.sum(), matrix)

    @property
    def entropy(self) -> float:
        """h_mu = -sum_i pi_i sum_j P_ij log P_ij."""
        p = self.transition
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, -p * np.log(np.where(p > 0, p, 1.0)), 0.0)
        return float(math.fsum(self.stationary @ terms))

    def mean(self, g: Sequence[float]) -> float:
        """Integral of an order-1 function given by its symbol values."""
        return float(self.stationary @ np.asarray(g, dtype=float))

    def to_json(self) -> str:
        return json.dumps({"P": self.transition.tolist(), "pi": self.stationary.tolist()})

    @classmethod
    def from_json(cls, text: str, matrix: IncidenceMatrix | None = None) -> MarkovMeasure:
        doc = json.loads(text)
        return cls(np.array(doc["P"]), np.array(doc["pi"]), matrix)


class Mass(NamedTuple):
    p: float
    log_p: float
    supported: bool


def _log_path(mu: MarkovMeasure, seq: np.ndarray) -> float:
    if seq.size == 0:
        return 0.0
    first = mu.stationary[seq[0]]
    steps = mu.transition[seq[:-1], seq[1:]]
    if first <= 0 or np.any(steps <= 0):
        return -math.inf
    return math.log(first) + math.fsum(np.log(steps))


def cylinder_mass(mu: MarkovMeasure, w: Sequence[int]) -> Mass:
    """mu([w]); an inadmissible or unsupported word has mass 0 with ``supported=False``."""
    seq = np.asarray(w, dtype=np.int64)
    if mu.matrix is not None and not mu.matrix.is_admissible(seq.tolist()):
        return Mass(0.0, -math.inf, False)
    lp = _log_path(mu, seq)
    if lp == -math.inf:
        return Mass(0.0, lp, False)
    return Mass(math.exp(lp), lp, True)


def _check_potential(phi: Potential) -> None:
    if phi.min <= 0:
        raise ValueError("the local entropy quotient needs a strictly positive potential")


def _cyclic_bk(mu: MarkovMeasure, period: np.ndarray, alpha: float, phi: Potential) -> float:
    nxt = np.roll(period, -1)
    steps = mu.transition[period, nxt]
    if np.any(steps <= 0):
        raise UnsupportedPointError("point leaves the support of the measure; local entropy is +inf")
    info = math.fsum(-np.log(steps)) / len(period)
    m = phi.order
    ext = np.concatenate([period, np.resize(period, m - 1)]) if m > 1 else period
    mean_phi = math.fsum(phi.window_values(ext.tolist())[: len(period)]) / len(period)
    return (1.0 + alpha) * info / mean_phi


def local_bk_entropy_exact(
    mu: MarkovMeasure,
    x: SymbolicPoint,
    alpha: float,
    phi: Potential,
    eps: float = math.exp(-1.0),
) -> float:
    """lim_n -log mu(B_n^alpha(x, eps)) / S_n phi(x) for eventually periodic x.

    The ball is the cylinder of length ~(1+alpha)n, so the limit is
    (1+alpha) times the mean information per symbol over the period divided
    by the mean of phi over the period.  It does not depend on eps.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    _check_potential(phi)
    pre = np.asarray(x.preperiod + x.period[:1], dtype=np.int64)
    if _log_path(mu, pre) == -math.inf:
        raise UnsupportedPointError("point leaves the support of the measure; local entropy is +inf")
    return _cyclic_bk(mu, np.asarray(x.period, dtype=np.int64), alpha, phi)


def local_bk_entropy_empirical(
    mu: MarkovMeasure,
    x: SymbolicPoint,
    alpha: float,
    phi: Potential,
    eps: float,
    n: int,
) -> float:
    """-log mu(B_n^alpha(x, eps)) / S_n phi(x); +inf when the ball has zero mass."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_potential(phi)
    ell = cylinder_length(n, alpha, eps)
    lp = _log_path(mu, x.prefix(ell))
    if lp == -math.inf:
        return math.inf
    return -lp / phi.birkhoff(x, n)


def bk_entropy_of_measure(mu: MarkovMeasure, alpha: float, phi: Potential) -> float:
    """Integrated local entropy of an ergodic Markov measure: (1+alpha) h_mu / integral of phi.

    The local value is the same at mu-almost every point, so no sampling is needed.
    """
    _check_potential(phi)
    return (1.0 + alpha) * mu.entropy / mu.mean(phi.symbol_values())


@dataclass(frozen=True)
class BKEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    closure_trim: float    # mean number of symbols dropped to close trajectories

    def to_json(self) -> str:
        return json.dumps({"mean": self.mean, "stderr": self.stderr, "samples": self.samples,
                           "seed": self.seed, "closure_trim": self.closure_trim}, sort_keys=True)


def sample_trajectory(mu: MarkovMeasure, length: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(length)
    k1 = mu.k - 1
    first = min(int(np.searchsorted(np.cumsum(mu.stationary), u[0], side="right")), k1)
    # the symbol that follows state i if step j draws u[j], for every i at once
    follow = [np.minimum(np.searchsorted(np.cumsum(row), u, side="right"), k1).tolist()
              for row in mu.transition]
    out = [first]
    cur = first
    for j in range(1, length):
        cur = follow[cur][j]
        out.append(cur)
    return np.array(out, dtype=np.int64)


def close_trajectory(mu: MarkovMeasure, traj: np.ndarray) -> np.ndarray:
    """Longest prefix whose last symbol can return to the first: a periodic point."""
    back = mu.transition[traj, traj[0]] > 0
    idx = np.flatnonzero(back)
    if idx.size == 0:
        raise UnsupportedPointError("trajectory cannot be closed into a periodic point")
    return traj[: idx[-1] + 1]


def sample_points(mu: MarkovMeasure, samples: int, seed: int, length: int = 10_000) -> list[np.ndarray]:
    """Periodic points obtained by closing mu-typical trajectories; one child seed per sample."""
    children = np.random.SeedSequence(seed).spawn(samples)
    return [close_trajectory(mu, sample_trajectory(mu, length, np.random.default_rng(c))) for c in children]


def integrated_bk_entropy(
    mu: MarkovMeasure,
    alpha: float,
    phi: Potential,
    samples: int = 100,
    seed: int = 0,
    length: int = 10_000,
) -> BKEstimate:
    """Monte-Carlo mean of the exact local entropy over mu-typical points."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    _check_potential(phi)
    periods = sample_points(mu, samples, seed, length)
    vals = np.array([_cyclic_bk(mu, per, alpha, phi) for per in periods])
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    trim = float(np.mean([length - len(p) for p in periods]))
    return BKEstimate(float(vals.mean()), se, samples, seed, trim)


@dataclass(frozen=True)
class FrostmanReport:
    passed: bool
    worst_ratio: float          # max over checks of mu(ball) / ((1/c) exp(-s S_m phi))
    m0: int | None              # smallest m from which every check up to n_max passes
    checks: int


def verify_frostman_bound(
    mu: MarkovMeasure,
    s: float,
    c: float,
    alpha: float,
    phi: Potential,
    eps: float,
    n_min: int,
    n_max: int,
    samples: int = 20,
    seed: int = 0,
) -> FrostmanReport:
    """Check mu(B_m^alpha(x, eps)) <= (1/c) exp(-s S_m phi(x)) at sampled (x, m)."""
    if not c > 0:
        raise ValueError("c must be positive")
    _check_potential(phi)
    ms = range(n_min, n_max + 1)
    length = max(cylinder_length(n_max, alpha, eps), n_max + phi.order) + 1
    periods = sample_points(mu, samples, seed, max(length, 64) * 2)
    worst = -math.inf
    fail_at = [False] * len(ms)
    for per in periods:
        x = SymbolicPoint((), tuple(per.tolist()))
        seq = x.prefix(length)
        for i, m in enumerate(ms):
            lp = _log_path(mu, seq[: cylinder_length(m, alpha, eps)])
            sm = math.fsum(phi.window_values(seq[: m + phi.order - 1].tolist())[:m])
            log_ratio = lp - (-math.log(c) - s * sm)
            worst = max(worst, log_ratio)
            if log_ratio > 1e-12:
                fail_at[i] = True
    m0 = None
    for i in range(len(ms) - 1, -1, -1):
        if fail_at[i]:
            break
        m0 = ms[i]
    return FrostmanReport(not any(fail_at), math.exp(worst), m0, len(periods) * len(ms))
