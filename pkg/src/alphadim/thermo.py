"""Transfer-matrix pressure, Parry measures and Legendre-transform spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .measures import MarkovMeasure
from .potential import Potential
from .symbolic import IncidenceMatrix, block_presentation, perron_root, spectral_radius


@dataclass(frozen=True, eq=False)
class WeightedMatrix:
    """B_ij = A_ij * w_ij with w_ij > 0 exactly on the support of A."""

    base: IncidenceMatrix
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.base.k, self.base.k):
            raise ValueError("weight shape does not match the incidence matrix")
        if np.any((w > 0) != (self.base.array > 0)):
            raise ValueError("zero pattern of the weights must match the incidence matrix")
        object.__setattr__(self, "weights", w)

    def log_radius(self) -> float:
        return math.log(perron_root(self.weights))


def _order_one(a: IncidenceMatrix, g: Potential) -> tuple[IncidenceMatrix, np.ndarray]:
    """Recode an order-m potential as an order-1 potential on the m-block shift."""
    if g.order == 1:
        return a, g.symbol_values()
    blocks = block_presentation(a, g.order)
    return blocks, np.array([g.table[w] for w in blocks.labels])


def weighted_matrix(a: IncidenceMatrix, g: Potential, t: float = 1.0) -> tuple[WeightedMatrix, float]:
    """diag(e^{t g - shift}) A and the shift that keeps the weights in range."""
    base, vals = _order_one(a, g)
    tg = t * vals
    shift = float(tg.max())
    return WeightedMatrix(base, np.exp(tg - shift)[:, None] * base.array), shift


def classical_pressure(a: IncidenceMatrix, g: Potential, t: float = 1.0) -> float:
    """log r(A_{ij} e^{t g(i)}): the classical pressure of t*g."""
    b, shift = weighted_matrix(a, g, t)
    return b.log_radius() + shift


def _perron_vectors(b: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    w, vr = np.linalg.eig(b)
    j = int(np.argmax(w.real))
    wl, vl = np.linalg.eig(b.T)
    i = int(np.argmax(wl.real))
    v = np.abs(np.real(vr[:, j]))
    u = np.abs(np.real(vl[:, i]))
    return float(w[j].real), u, v


def _require_irreducible(a: IncidenceMatrix) -> None:
    if not a.is_irreducible():
        bad = a.unreachable()
        raise ValueError(f"matrix is reducible; unreachable state pairs (from, to): {bad[:8]}")


def gibbs_measure(a: IncidenceMatrix, g: Potential, t: float = 1.0) -> MarkovMeasure:
    """Equilibrium Markov measure of t*g for an order-1 g on an irreducible A."""
    _require_irreducible(a)
    if g.order != 1:
        raise ValueError("gibbs_measure expects an order-1 potential")
    b, _ = weighted_matrix(a, g, t)
    r, u, v = _perron_vectors(b.weights)
    p = b.weights * v[None, :] / (r * v[:, None])
    p = p / p.sum(axis=1, keepdims=True)
    pi = u * v
    return MarkovMeasure(p, pi / pi.sum(), a)


def parry_measure(a: IncidenceMatrix) -> MarkovMeasure:
    """Measure of maximal entropy: P_ij = A_ij v_j / (r v_i), pi_i ~ u_i v_i."""
    return gibbs_measure(a, Potential.constant(a, 0.0), 0.0)


def pressure_derivative(a: IncidenceMatrix, g: Potential, t: float) -> float:
    """d/dt classical_pressure(t g) = integral of g against the Gibbs measure of t g."""
    if a.is_irreducible():
        return gibbs_measure(a, g, t).mean(g.symbol_values())
    h = 1e-6
    return (classical_pressure(a, g, t + h) - classical_pressure(a, g, t - h)) / (2 * h)


def cycle_mean_range(a: IncidenceMatrix, g: Potential) -> tuple[float, float]:
    """Min and max mean of g over cycles of the graph of A (Karp's algorithm)."""
    base, vals = _order_one(a, g)
    adj = base.array > 0
    k = base.k

    def karp(w: np.ndarray) -> float:
        d = np.full((k + 1, k), math.inf)
        d[0] = 0.0
        for step in range(1, k + 1):
            cand = np.where(adj, d[step - 1][:, None] + w[:, None], math.inf)
            d[step] = cand.min(axis=0)
        best = math.inf
        for v in range(k):
            if not math.isfinite(d[k, v]):
                continue
            worst = max((d[k, v] - d[j, v]) / (k - j) for j in range(k) if math.isfinite(d[j, v]))
            best = min(best, worst)
        return best

    return karp(vals), -karp(-vals)


@dataclass(frozen=True)
class SpectrumPoint:
    s: float
    entropy: float          # sup{h_mu : integral of g = s}
    t_star: float
    alpha: float = 0.0
    empty: bool = False

    @property
    def alpha_scaled(self) -> float:
        return (1.0 + self.alpha) * self.entropy


_T_MAX = 400.0


def level_set_entropy(
    a: IncidenceMatrix,
    g: Potential,
    s: float,
    alpha: float = 0.0,
    tol: float = 1e-8,
) -> SpectrumPoint:
    """E(s) = inf_t (P(t g) - t s), with (1+alpha) E(s) as the alpha-scaled value."""
    lo_g, hi_g = g.min, g.max
    if not lo_g <= s <= hi_g:
        raise ValueError(f"level s={s} lies outside [min g, max g] = [{lo_g}, {hi_g}]")
    c_lo, c_hi = cycle_mean_range(a, g)
    slack = 1e-12 * max(1.0, abs(s))
    if s < c_lo - slack or s > c_hi + slack:
        return SpectrumPoint(s, math.nan, math.nan, alpha, empty=True)

    def f(t: float) -> float:
        return classical_pressure(a, g, t) - t * s

    if c_lo == c_hi:
        return SpectrumPoint(s, f(0.0), 0.0, alpha)
    # expand the bracket until the first-order condition changes sign inside it
    lo, hi = -1.0, 1.0
    while lo > -_T_MAX and pressure_derivative(a, g, lo) > s:
        lo *= 2.0
    while hi < _T_MAX and pressure_derivative(a, g, hi) < s:
        hi *= 2.0
    res = minimize_scalar(f, bounds=(max(lo, -_T_MAX), min(hi, _T_MAX)), method="bounded",
                          options={"xatol": tol})
    t_star = float(res.x)
    ent = max(float(res.fun), 0.0)
    return SpectrumPoint(s, ent, t_star, alpha)


def spectrum_grid(a: IncidenceMatrix, g: Potential, levels, alpha: float = 0.0) -> list[SpectrumPoint]:
    return [level_set_entropy(a, g, float(s), alpha) for s in levels]


def divergence_set_entropy(a: IncidenceMatrix, alpha: float, g: Potential) -> float:
    """alpha-Bowen entropy of the points where the Birkhoff averages of g diverge."""
    _require_irreducible(a)
    lo, hi = cycle_mean_range(a, g)
    if math.isclose(lo, hi, rel_tol=0.0, abs_tol=1e-12):
        raise ValueError("empty divergence set: g has the same mean on every cycle")
    return (1.0 + alpha) * math.log(spectral_radius(a))


def generic_points_entropy(mu: MarkovMeasure, alpha: float) -> float:
    """(1+alpha) h_mu for the set of mu-generic points."""
    return (1.0 + alpha) * mu.entropy


def bernoulli_family(a: IncidenceMatrix, grid: int = 99) -> list[MarkovMeasure]:
    """Bernoulli(p, 1-p) for p on an even grid in (0, 1), restricted to 2 symbols."""
    if a.k != 2:
        raise ValueError("the Bernoulli grid is defined for two symbols")
    ps = np.arange(1, grid + 1) / (grid + 1)
    return [MarkovMeasure.bernoulli([p, 1 - p]) for p in ps]


def variational_sup(values) -> tuple[int, float]:
    """Index and value of the largest member of a measure family's scores."""
    vals = list(values)
    j = int(np.argmax(vals))
    return j, float(vals[j])
