"""Caratheodory-type cover values on SFTs and their critical exponents.

Every alpha-Bowen ball is a cylinder, so an admissible cover of a target set
is an antichain of cylinders that meets every long word of the target, each
element carrying an order ``n_i`` in ``[n_min, n_max]`` (its length is
``L(n_i)``).  The optimal cover is found by dynamic programming on the word
tree: a node either is a cover element or delegates to its children.

Three weight families are supported:

``dimension``   exp(-s * S_{n_i} phi)
``pressure``    exp(-s * n_i + S_{n_i} h)
``hausdorff``   exp(-s * n_i) with ``n_i`` the cylinder length itself

The Birkhoff sum is the sup over the cylinder (``weight_convention="sup"``)
or its value at a canonical center (``"center"``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .geometry import cylinder_length
from .language import Language, as_language
from .potential import Potential
from .symbolic import ConvergenceError, IncidenceMatrix, Word

MODES = ("dimension", "pressure", "hausdorff")
CONVENTIONS = ("sup", "center")

DEFAULT_NODE_BUDGET = 1 << 21
DEFAULT_COVER_LIMIT = 4096


class HorizonError(ValueError):
    """No cover element is reachable within the scale window."""


class BracketError(ValueError):
    """The supplied interval does not bracket the critical exponent."""

    def __init__(self, msg: str, lo: float, hi: float, f_lo: float, f_hi: float):
        super().__init__(f"{msg}: log value {f_lo:.6g} at s={lo:.6g}, {f_hi:.6g} at s={hi:.6g}")
        self.lo, self.hi, self.f_lo, self.f_hi = lo, hi, f_lo, f_hi


class MonotonicityError(ConvergenceError):
    """The pressure function failed the strict-decrease check."""


@dataclass(frozen=True)
class CoverProblem:
    matrix: IncidenceMatrix
    target: Language | None = None
    s: float = 0.0
    eps: float = math.exp(-1.0)
    alpha: float = 0.0
    n_min: int = 1
    n_max: int = 20
    potential: Potential | None = None
    weight_convention: str = "sup"
    mode: str = "dimension"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.weight_convention not in CONVENTIONS:
            raise ValueError(f"weight_convention must be one of {CONVENTIONS}")
        if self.n_min < 1:
            raise ValueError("n_min must be >= 1")
        if self.n_max < self.n_min:
            raise HorizonError(
                f"horizon too shallow: n_max={self.n_max} < n_min={self.n_min}, no cover element is reachable")
        object.__setattr__(self, "target", as_language(self.matrix, self.target))
        if self.potential is not None and self.potential.matrix != self.matrix:
            raise ValueError("potential is defined on a different matrix")
        if self.mode == "dimension":
            phi = self.phi
            if not phi.positive:
                raise ValueError("dimension mode needs a strictly positive potential")

    def with_s(self, s: float) -> CoverProblem:
        return replace(self, s=float(s))

    @property
    def phi(self) -> Potential:
        if self.potential is not None:
            return self.potential
        c = 0.0 if self.mode == "pressure" else 1.0
        return Potential.constant(self.matrix, c)

    @property
    def depth_orders(self) -> dict[int, int]:
        """Cylinder length -> order n of the cover elements with that length."""
        if self.mode == "hausdorff":
            return {d: d for d in range(self.n_min, self.n_max + 1)}
        return {cylinder_length(n, self.alpha, self.eps): n for n in range(self.n_min, self.n_max + 1)}

    @property
    def compressible(self) -> bool:
        """True when the weight depends only on the order (constant potential)."""
        return self.mode == "hausdorff" or self.phi.is_constant

    def log_weight(self, word: Word, n: int) -> float:
        s = self.s
        if self.mode == "hausdorff":
            return -s * len(word)
        phi = self.phi
        if self.weight_convention == "sup":
            b = phi.extremal_birkhoff(word, n)
        else:
            b = phi.center_birkhoff(word, n)
        if self.mode == "dimension":
            return -s * b
        return -s * n + b

    def constant_log_weight(self, n: int, length: int) -> float:
        if self.mode == "hausdorff":
            return -self.s * length
        c = self.phi.min
        if self.mode == "dimension":
            return -self.s * n * c
        return -self.s * n + n * c


@dataclass
class CoverValue:
    log_value: float
    cover: list[tuple[Word, int, float]] | None
    cover_size: int
    metadata: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return math.exp(self.log_value) if self.log_value < 709 else math.inf

    def certificate(self) -> str:
        """JSON certificate listing the optimal cover elements."""
        body = {
            "log_value": self.log_value,
            "cover_size": self.cover_size,
            "cover": None if self.cover is None else [
                {"word": "".join(map(str, w)) if all(x < 10 for x in w) else list(w),
                 "n": n, "log_weight": lw}
                for w, n, lw in self.cover
            ],
            "metadata": self.metadata,
        }
        return json.dumps(body, sort_keys=True)


def _lse(values) -> float:
    vals = [v for v in values if v != -math.inf]
    if not vals:
        return -math.inf
    m = max(vals)
    if m == math.inf:
        return m
    return m + math.log(math.fsum(math.exp(v - m) for v in vals))


# -- compressed dynamic program -------------------------------------------------

def _compressed(problem: CoverProblem, cover_limit: int) -> CoverValue:
    lang = problem.target
    orders = problem.depth_orders
    depth = max(orders)
    t = lang.transfer()
    nq = t.shape[0]
    logw = {d: problem.constant_log_weight(n, d) for d, n in orders.items()}
    choose: dict[int, np.ndarray] = {}
    v = np.full(nq, logw[depth])
    choose[depth] = np.ones(nq, dtype=bool)
    for d in range(depth - 1, -1, -1):
        top = v.max()
        with np.errstate(divide="ignore"):
            child = top + np.log(t @ np.exp(v - top))
        if d in logw:
            pick = logw[d] <= child
            choose[d] = pick
            v = np.where(pick, logw[d], child)
        else:
            v = child
    # cover size via integer counting on the same decisions
    size = np.ones(nq, dtype=object)
    for d in range(depth - 1, -1, -1):
        child = np.array([sum(int(size[r]) for _, r in lang.edges[q]) for q in range(nq)], dtype=object)
        size = np.where(choose[d], 1, child) if d in choose else child
    cover_size = int(size[lang.root])
    cover = None
    if cover_size <= cover_limit:
        cover = []
        stack: list[tuple[Word, int]] = [((), lang.root)]
        while stack:
            w, q = stack.pop()
            d = len(w)
            if d in choose and choose[d][q]:
                cover.append((w, orders[d], logw[d]))
                continue
            for a, r in reversed(lang.edges[q]):
                stack.append((w + (a,), r))
    return CoverValue(float(v[lang.root]), cover, cover_size,
                      {"method": "compressed", "states": nq, "depth": depth})


# -- explicit word-tree dynamic program --------------------------------------------

def _tree_size(lang: Language, depth: int) -> int:
    return sum(lang.count(d) for d in range(depth + 1))


def _explicit(problem: CoverProblem, cover_limit: int, node_budget: int) -> CoverValue:
    lang = problem.target
    orders = problem.depth_orders
    depth = max(orders)
    nodes = _tree_size(lang, depth)
    if nodes > node_budget:
        raise MemoryError(
            f"explicit cover DP needs {nodes} nodes, budget is {node_budget}; "
            "lower n_max or raise the node budget")

    def solve(w: Word, q: int) -> tuple[float, int, list | None]:
        d = len(w)
        here = problem.log_weight(w, orders[d]) if d in orders else None
        if d == depth:
            return here, 1, [(w, orders[d], here)]
        parts = [solve(w + (a,), r) for a, r in lang.edges[q]]
        child = _lse(p[0] for p in parts)
        if here is not None and here <= child:
            return here, 1, [(w, orders[d], here)]
        size = sum(p[1] for p in parts)
        if size > cover_limit or any(p[2] is None for p in parts):
            return child, size, None
        return child, size, [c for p in parts for c in p[2]]

    val, size, cover = solve((), lang.root)
    return CoverValue(val, cover, size, {"method": "explicit", "nodes": nodes, "depth": depth})


def outer_measure(
    problem: CoverProblem,
    cover_limit: int = DEFAULT_COVER_LIMIT,
    node_budget: int = DEFAULT_NODE_BUDGET,
    force_explicit: bool = False,
) -> CoverValue:
    """Optimal cover value at scale window [n_min, n_max] and its cover.

    The cover itself is reported only when it has at most ``cover_limit``
    elements; ``cover_size`` is always exact.
    """
    if problem.compressible and not force_explicit:
        return _compressed(problem, cover_limit)
    return _explicit(problem, cover_limit, node_budget)


# -- critical exponents -----------------------------------------------------------------

def bisect_crossing(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-6,
    max_iter: int = 60,
) -> float:
    """sup{s : f(s) >= 0} for a non-increasing f, by bisection."""
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo >= 0 and f_hi < 0):
        raise BracketError("interval does not bracket the crossing", lo, hi, f_lo, f_hi)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0:
            lo = mid
        else:
            hi = mid
    else:
        if hi - lo > tol:
            raise ConvergenceError(f"bisection stopped after {max_iter} steps with width {hi - lo:.3g}")
    return 0.5 * (lo + hi)


def critical_exponent(
    problem: CoverProblem,
    bracket: tuple[float, float] | None = None,
    tol: float = 1e-6,
    max_iter: int = 60,
    **kw,
) -> float:
    """sup{s : value(s) >= 1} at the problem's scale window."""
    if bracket is None:
        bracket = default_bracket(problem)
    return bisect_crossing(lambda s: outer_measure(problem.with_s(s), **kw).log_value,
                           bracket, tol, max_iter)


def default_bracket(problem: CoverProblem) -> tuple[float, float]:
    """An interval guaranteed to contain the finite-scale crossing.

    The upper end makes the single-level cover at n_max cost less than 1;
    the lower end makes every single element cost at least 1.
    """
    lang = problem.target
    orders = problem.depth_orders
    depth = max(orders)
    n = orders[depth]
    log_count = math.log(max(lang.count(depth), 1))
    if problem.mode == "hausdorff":
        return 0.0, log_count / depth + 1.0
    phi = problem.phi
    if problem.mode == "dimension":
        return 0.0, log_count / (n * phi.min) + 1.0
    return -phi.norm - 1.0, log_count / n + phi.norm + 1.0


# -- pressure and the Bowen root ----------------------------------------------------------

def pressure_value(
    a: IncidenceMatrix,
    alpha: float,
    h: Potential,
    eps: float = math.exp(-1.0),
    n_min: int = 10,
    n_max: int = 20,
    target=None,
    weight_convention: str = "sup",
    tol: float = 1e-8,
    **kw,
) -> float:
    """Finite-scale alpha-pressure crossing of ``h`` on the target."""
    problem = CoverProblem(a, target, 0.0, eps, alpha, n_min, n_max, h, weight_convention, "pressure")
    return critical_exponent(problem, None, tol, **kw)


def transfer_pressure(a: IncidenceMatrix, alpha: float, h: Potential) -> float:
    """Asymptotic alpha-pressure of a locally constant ``h`` on the full SFT.

    A ball of order n is a cylinder of length about (1+alpha)n whose weight
    sees S_n h only.  Covering the points whose symbol statistics follow an
    invariant measure mu costs exp(n((1+alpha)h_mu + mu(h))), and optimizing
    over mu gives  P = (1+alpha) * P_classical(h / (1+alpha)).
    Adaptive multi-level covers realise this bound; a single level does not.
    """
    from .thermo import classical_pressure

    return (1.0 + alpha) * classical_pressure(a, h.scaled(1.0 / (1.0 + alpha)))


def pressure_grid(phi_of_t: Callable[[float], float], ts: np.ndarray) -> np.ndarray:
    return np.array([phi_of_t(float(t)) for t in ts])


@dataclass(frozen=True)
class BowenRoot:
    root: float
    grid_t: np.ndarray
    grid_pressure: np.ndarray
    method: str


def bs_dimension_report(
    a: IncidenceMatrix,
    alpha: float,
    phi: Potential,
    eps: float = math.exp(-1.0),
    scales: tuple[int, int] = (20, 40),
    method: str = "cover",
    target=None,
    tol: float = 1e-6,
    grid: int = 9,
) -> BowenRoot:
    """Root of t -> P(-t phi) with a strict-decrease check on a grid first."""
    if not phi.positive or phi.min <= 0:
        raise ValueError("the Bowen root needs a strictly positive potential")
    if method == "cover":
        n_min, n_max = scales

        def pres(t: float) -> float:
            return pressure_value(a, alpha, -t * phi if t else Potential.constant(a, 0.0),
                                  eps, n_min, n_max, target, tol=tol / 4)
        slack = tol
    elif method == "transfer":
        if target is not None:
            raise ValueError("the transfer route covers the full SFT only")

        def pres(t: float) -> float:
            return transfer_pressure(a, alpha, -t * phi if t else Potential.constant(a, 0.0))
        slack = 1e-9
    else:
        raise ValueError("method must be 'cover' or 'transfer'")

    p0 = pres(0.0)
    t_hi = max(p0, 0.0) / phi.min + 1.0
    ts = np.linspace(0.0, t_hi, grid)
    vals = pressure_grid(pres, ts)
    drops = -np.diff(vals)
    need = phi.min * np.diff(ts)
    if np.any(drops < need - slack) or np.any(drops <= 0):
        j = int(np.argmin(drops - need))
        raise MonotonicityError(
            f"pressure is not strictly decreasing with slope <= -{phi.min:.6g} on [{ts[j]:.6g}, {ts[j + 1]:.6g}]")
    root = bisect_crossing(pres, (0.0, t_hi), tol)
    return BowenRoot(root, ts, vals, method)


def bs_dimension(*args, **kw) -> float:
    """The Bowen root of t -> P^alpha(-t phi); see :func:`bs_dimension_report`."""
    return bs_dimension_report(*args, **kw).root


# -- exact weighted cover at tiny scales -------------------------------------------------------

@dataclass(frozen=True)
class CoverInstance:
    """The explicit tree of a tiny cover problem."""

    words: tuple[Word, ...]                  # every node, root first
    children: dict[Word, tuple[Word, ...]]
    allowed: dict[Word, float]               # candidate element -> log weight
    leaves: tuple[Word, ...]                 # nodes at maximal depth

    def ancestors(self, leaf: Word) -> list[Word]:
        return [leaf[:j] for j in range(len(leaf) + 1) if leaf[:j] in self.allowed]

    def dp(self, weight: Callable[[Word], object]):
        """Min total weight of an antichain meeting every leaf (any ordered field)."""
        best: dict[Word, object] = {}
        for w in reversed(self.words):
            kids = self.children.get(w, ())
            child = sum((best[c] for c in kids), start=0 * weight(self.leaves[0])) if kids else None
            if w in self.allowed:
                here = weight(w)
                best[w] = here if child is None or here <= child else child
            else:
                best[w] = child
        return best[()]

    def antichains(self) -> Iterator[list[Word]]:
        """Every minimal cover: each node is either taken or split."""
        def rec(w: Word) -> Iterator[list[Word]]:
            if w in self.allowed:
                yield [w]
            kids = self.children.get(w, ())
            if not kids:
                return
            parts = [list(rec(c)) for c in kids]
            if any(not p for p in parts):
                return
            yield from _products(parts)
        yield from rec(())


def _products(parts: list[list[list[Word]]]) -> Iterator[list[Word]]:
    if not parts:
        yield []
        return
    for head in parts[0]:
        for tail in _products(parts[1:]):
            yield head + tail


def cover_instance(problem: CoverProblem, max_nodes: int = 5000) -> CoverInstance:
    lang = problem.target
    orders = problem.depth_orders
    depth = max(orders)
    if _tree_size(lang, depth) > max_nodes:
        raise MemoryError(f"tiny-scale instance limited to {max_nodes} nodes")
    words: list[Word] = []
    children: dict[Word, tuple[Word, ...]] = {}
    allowed: dict[Word, float] = {}
    frontier = [((), lang.root)]
    while frontier:
        nxt = []
        for w, q in frontier:
            words.append(w)
            if len(w) in orders:
                allowed[w] = problem.log_weight(w, orders[len(w)])
            if len(w) < depth:
                kids = [(w + (a,), r) for a, r in lang.edges[q]]
                children[w] = tuple(k for k, _ in kids)
                nxt.extend(kids)
        frontier = nxt
    leaves = tuple(w for w in words if len(w) == depth)
    return CoverInstance(tuple(words), children, allowed, leaves)


@dataclass(frozen=True)
class WeightedCover:
    value: Fraction
    dp_value: Fraction
    coefficients: dict[Word, Fraction]
    weights: dict[Word, Fraction]


def weighted_cover_min(
    a: IncidenceMatrix,
    s: float,
    eps: float = math.exp(-1.0),
    alpha: float = 0.0,
    n_min: int = 1,
    n_max: int = 4,
    potential: Potential | None = None,
    target=None,
    weight_convention: str = "center",
    mode: str = "dimension",
    max_nodes: int = 5000,
) -> WeightedCover:
    """Exact weighted-cover LP: min sum c_i w_i with sum_{i: leaf in C_i} c_i >= 1.

    Weights are the exact rationals of the float weights.  The LP is solved by
    a rational simplex; ``dp_value`` is the integral optimum from the tree DP.
    """
    from .lp import solve_covering_lp

    problem = CoverProblem(a, target, s, eps, alpha, n_min, n_max, potential, weight_convention, mode)
    inst = cover_instance(problem, max_nodes)
    cands = sorted(inst.allowed, key=lambda w: (len(w), w))
    weights = {w: Fraction(math.exp(inst.allowed[w])) for w in cands}
    index = {w: i for i, w in enumerate(cands)}
    rows = [[index[u] for u in inst.ancestors(leaf)] for leaf in inst.leaves]
    value, coef = solve_covering_lp(rows, [weights[w] for w in cands])
    dp_value = inst.dp(lambda w: weights[w])
    return WeightedCover(value, dp_value, {w: coef[index[w]] for w in cands if coef[index[w]]}, weights)
