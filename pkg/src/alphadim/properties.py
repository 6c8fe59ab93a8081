"""Reusable invariant checks.

Each check returns a :class:`Check` so that the acceptance driver and the
property-based tests can share one implementation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .caratheodory import (
    CoverProblem,
    cover_instance,
    critical_exponent,
    outer_measure,
)
from .geometry import (
    BallSpec,
    alpha_entropy_sft,
    alpha_log_distance,
    cylinder_length,
)
from .language import as_language, union_language
from .measures import MarkovMeasure, cylinder_mass
from .potential import Potential
from .symbolic import IncidenceMatrix, SymbolicPoint, count_words, enumerate_words, spectral_radius


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: {self.detail}"


# -- symbolic core -----------------------------------------------------------------

def submultiplicativity(a: IncidenceMatrix, n_max: int = 20) -> Check:
    counts = [0] + [count_words(a, n) for n in range(1, 2 * n_max + 1)]
    worst = max(math.log(counts[m + n]) - math.log(counts[m] * counts[n])
                for m in range(1, n_max + 1) for n in range(1, n_max + 1))
    return Check("word counts are submultiplicative", worst <= 1e-12, f"max log excess {worst:.3g}")


def count_convergence(a: IncidenceMatrix, n: int = 200, tol: float = 0.05) -> Check:
    gap = abs(count_words(a, n, log=True) / n - math.log(spectral_radius(a)))
    return Check("(1/n) log #words approaches log r(A)", gap <= tol, f"gap {gap:.4g} at n={n}")


def brute_force_count(a: IncidenceMatrix, n: int, chunk: int = 1 << 20) -> int:
    """Count admissible strings by testing all k^n strings, vectorized in chunks."""
    k = a.k
    arr = a.array.astype(bool)
    total = k ** n
    count = 0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((n, codes.size), dtype=np.int64)
        rest = codes
        for j in range(n - 1, -1, -1):
            digits[j] = rest % k
            rest = rest // k
        ok = np.ones(codes.size, dtype=bool)
        for j in range(n - 1):
            ok &= arr[digits[j], digits[j + 1]]
        count += int(ok.sum())
    return count


def count_matches_brute_force(a: IncidenceMatrix, n_max: int = 12) -> Check:
    bad = [n for n in range(1, n_max + 1) if count_words(a, n) != brute_force_count(a, n)]
    return Check(f"exact word counts match enumeration (k={a.k})", not bad, f"mismatch at n={bad}" if bad else f"n<={n_max}")


# -- geometry ------------------------------------------------------------------------

def _random_point(a: IncidenceMatrix, rng: np.random.Generator, pre: int, per: int) -> SymbolicPoint:
    """A random eventually periodic admissible point."""
    for _ in range(1000):
        seq = [int(rng.integers(a.k))]
        for _ in range(pre + per - 1):
            seq.append(int(rng.choice(a.successors(seq[-1]))))
        period = tuple(seq[pre:])
        if a.allows(period[-1], period[0]):
            return SymbolicPoint(tuple(seq[:pre]), period)
    raise RuntimeError("could not sample a periodic point")


def metric_axioms(a: IncidenceMatrix, n: int, alpha: float, rng: np.random.Generator, trials: int = 50) -> Check:
    fails = []
    for _ in range(trials):
        x, y, z = (_random_point(a, rng, int(rng.integers(0, 5)), int(rng.integers(1, 5))) for _ in range(3))
        dxy = alpha_log_distance(x, y, n, alpha)
        dyx = alpha_log_distance(y, x, n, alpha)
        dxz = alpha_log_distance(x, z, n, alpha)
        dzy = alpha_log_distance(z, y, n, alpha)
        if dxy != dyx:
            fails.append("symmetry")
        if (dxy == -math.inf) != (x == y):
            fails.append("identity")
        if math.exp(dxy) > math.exp(dxz) + math.exp(dzy) + 1e-12:
            fails.append("triangle")
        if alpha_log_distance(x, y, n + 1, alpha) < dxy or alpha_log_distance(x, y, n, alpha + 0.5) < dxy:
            fails.append("monotone")
    return Check("alpha-Bowen metric axioms and monotonicity", not fails, ",".join(sorted(set(fails))) or f"{trials} triples")


def offset_length_bounds(n_values=range(10, 60), alphas=(0.0, 0.5, 1.0, 2.0),
                         epss=(math.exp(-1), math.exp(-2), 0.5)) -> Check:
    """n + floor(alpha(n-1)) + N0 + 2 <= L <= n + floor(n alpha) + N0 + 3."""
    bad = []
    for n, al, e in itertools.product(n_values, alphas, epss):
        ell = cylinder_length(n, al, e)
        n0 = BallSpec(n, al, e).n0
        if not n + math.floor(al * (n - 1)) + n0 + 2 <= ell <= n + math.floor(n * al) + n0 + 3:
            bad.append((n, al, round(e, 4), ell))
    return Check("cylinder-length bounds with +2 and +3 offsets", not bad,
                 f"{len(bad)} violations, first (n, alpha, eps, L) = {bad[0]}" if bad else "holds")


def corrected_sandwich(n_values=range(1, 200), alphas=(0.0, 0.5, 1.0, 2.0, 0.3),
                       epss=(math.exp(-1), math.exp(-2), 0.5, 0.05)) -> Check:
    """n + floor(alpha(n-1)) + N0 <= L <= n + floor(alpha(n-1)) + N0 + 1."""
    bad = []
    for n, al, e in itertools.product(n_values, alphas, epss):
        ell = cylinder_length(n, al, e)
        base = n + math.floor(al * (n - 1) + 1e-12) + BallSpec(n, al, e).n0
        if not base <= ell <= base + 1:
            bad.append((n, al, e, ell))
    return Check("corrected cylinder-length sandwich", not bad, f"violations {bad[:3]}" if bad else "holds")


def ball_matches_brute_force(a: IncidenceMatrix, n: int, alpha: float, eps: float,
                             rng: np.random.Generator, full_limit: int = 1 << 14, samples: int = 400) -> Check:
    """Membership by the metric's definition agrees with the cylinder description."""
    ell = cylinder_length(n, alpha, eps)
    depth = ell + 3
    x = _random_point(a, rng, int(rng.integers(0, 4)), int(rng.integers(1, 4)))
    xs = tuple(x.prefix(depth).tolist())
    log_eps = math.log(eps)
    if count_words(a, depth) <= full_limit:
        prefixes = enumerate_words(a, depth)
        mode = "all prefixes"
    else:
        # every first-disagreement position, with random admissible tails
        prefixes = []
        for _ in range(samples):
            j = int(rng.integers(0, depth + 1))
            w = list(xs[:j])
            while len(w) < depth:
                opts = a.successors(w[-1]) if w else list(range(a.k))
                if len(w) == j:
                    opts = [s for s in opts if s != xs[j]] or opts
                w.append(int(rng.choice(opts)))
            prefixes.append(tuple(w))
        mode = f"{samples} sampled prefixes"
    bad = 0
    for w in prefixes:
        y = x if w == xs else _continue(a, w)
        inside = alpha_log_distance(x, y, n, alpha) < log_eps
        if inside != (w[:ell] == xs[:ell]):
            bad += 1
    return Check(f"ball = cylinder of length L (n={n}, alpha={alpha}, eps={eps:.4g})",
                 bad == 0, f"{bad} disagreements over {len(prefixes)} ({mode})")


def _continue(a: IncidenceMatrix, w: tuple) -> SymbolicPoint:
    """An admissible point starting with ``w``: follow smallest successors until a symbol repeats."""
    seq = list(w)
    first_seen: dict[int, int] = {}
    cur = seq[-1]
    while cur not in first_seen:
        first_seen[cur] = len(seq) - 1
        cur = a.successors(cur)[0]
        seq.append(cur)
    start = first_seen[cur]
    return SymbolicPoint(tuple(seq[:start]), tuple(seq[start:-1]))


def bowen_below_entropy(a: IncidenceMatrix, alpha: float, n_min: int = 20, n_max: int = 40,
                        tol: float = 0.02) -> Check:
    crit = critical_exponent(CoverProblem(a, alpha=alpha, n_min=n_min, n_max=n_max), tol=1e-8)
    lim = alpha_entropy_sft(a, alpha, math.exp(-1), (1, 200)).limit
    return Check(f"cover exponent <= spanning entropy (alpha={alpha})", crit <= lim + tol,
                 f"{crit:.6f} vs {lim:.6f}")


# -- cover values ------------------------------------------------------------------------

def monotone_in_s(problem: CoverProblem, ss) -> Check:
    vals = [outer_measure(problem.with_s(s)).log_value for s in sorted(ss)]
    ok = all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
    return Check("cover value nonincreasing in s", ok, f"{len(vals)} points")


def monotone_in_nmin(problem: CoverProblem) -> Check:
    vals = []
    for n_min in range(1, problem.n_max + 1):
        p = CoverProblem(**{**problem.__dict__, "n_min": n_min})
        vals.append(outer_measure(p).log_value)
    ok = all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    return Check("cover value nondecreasing in n_min", ok, f"n_min=1..{problem.n_max}")


def union_properties(a: IncidenceMatrix, forb1, forb2, alpha: float = 0.5,
                     n_min: int = 15, n_max: int = 30, s: float = 0.4) -> Check:
    l1, l2 = as_language(a, forb1), as_language(a, forb2)
    lu = union_language(l1, l2)
    base = dict(alpha=alpha, n_min=n_min, n_max=n_max)
    v1 = outer_measure(CoverProblem(a, l1, s, **base)).log_value
    v2 = outer_measure(CoverProblem(a, l2, s, **base)).log_value
    vu = outer_measure(CoverProblem(a, lu, s, **base)).log_value
    sub = vu <= np.logaddexp(v1, v2) + 1e-12
    c1 = critical_exponent(CoverProblem(a, l1, **base), tol=1e-9)
    c2 = critical_exponent(CoverProblem(a, l2, **base), tol=1e-9)
    cu = critical_exponent(CoverProblem(a, lu, **base), tol=1e-9)
    # finite-scale union exponent exceeds the max by at most log 2 / (n_min)
    stable = max(c1, c2) - 1e-8 <= cu <= max(c1, c2) + math.log(2) / n_min + 1e-8
    return Check("union subadditivity and max-stability", bool(sub and stable),
                 f"exponents {c1:.5f}, {c2:.5f}, union {cu:.5f}")


def dimension_sandwich(a: IncidenceMatrix, phi: Potential, alpha: float, n_min: int, n_max: int,
                       tol: float = 1e-9) -> Check:
    """entropy / max phi <= dimension exponent <= entropy / min phi at one scale."""
    base = dict(alpha=alpha, n_min=n_min, n_max=n_max)
    ent = critical_exponent(CoverProblem(a, **base), tol=tol)
    dim = critical_exponent(CoverProblem(a, potential=phi, **base), tol=tol)
    ok = ent / phi.max - 2 * tol <= dim <= ent / phi.min + 2 * tol
    return Check("entropy/max phi <= dimension <= entropy/min phi", ok,
                 f"{ent / phi.max:.6f} <= {dim:.6f} <= {ent / phi.min:.6f}")


def pressure_lipschitz(a: IncidenceMatrix, h1: Potential, h2: Potential, alpha: float,
                       n_min: int, n_max: int, tol: float = 1e-9) -> Check:
    from .caratheodory import pressure_value

    p1 = pressure_value(a, alpha, h1, n_min=n_min, n_max=n_max, tol=tol)
    p2 = pressure_value(a, alpha, h2, n_min=n_min, n_max=n_max, tol=tol)
    gap = abs(p1 - p2)
    bound = h1.sup_distance(h2)
    return Check("pressure is 1-Lipschitz in the potential", gap <= bound + 2 * tol, f"{gap:.6f} <= {bound:.6f}")


def pressure_sandwich(a: IncidenceMatrix, h: Potential, alpha: float, n_min: int, n_max: int,
                      tol: float = 1e-9) -> Check:
    from .caratheodory import pressure_value

    ent = pressure_value(a, alpha, Potential.constant(a, 0.0), n_min=n_min, n_max=n_max, tol=tol)
    p = pressure_value(a, alpha, h, n_min=n_min, n_max=n_max, tol=tol)
    ok = ent - h.norm - 2 * tol <= p <= ent + h.norm + 2 * tol
    return Check("entropy - ||h|| <= pressure <= entropy + ||h||", ok, f"{ent:.6f} +- {h.norm:.4f} vs {p:.6f}")


def weight_convention(problem: CoverProblem, tol: float = 1e-9) -> Check:
    """M(s) <= M1(s) <= M((1 - gamma/m) s) and the matching exponent sandwich."""
    sup_p = CoverProblem(**{**problem.__dict__, "weight_convention": "sup"})
    ctr_p = CoverProblem(**{**problem.__dict__, "weight_convention": "center"})
    phi = sup_p.phi
    shrink = 1.0 - phi.modulus(problem.eps) / phi.min
    s = problem.s
    m_sup = outer_measure(sup_p).log_value
    m_ctr = outer_measure(ctr_p).log_value
    m_shr = outer_measure(sup_p.with_s(shrink * s)).log_value
    values_ok = m_sup <= m_ctr + tol and m_ctr <= m_shr + tol
    c_sup = critical_exponent(sup_p, tol=1e-11)
    c_ctr = critical_exponent(ctr_p, tol=1e-11)
    exps_ok = shrink * c_ctr - tol <= c_sup <= c_ctr + tol
    return Check("sup-weight vs center-weight sandwich", bool(values_ok and exps_ok),
                 f"shrink={shrink:.4f} exps {c_sup:.9f} / {c_ctr:.9f}")


def decrement_bound(pres, phi_min: float, ts, slack: float) -> Check:
    vals = [pres(t) for t in ts]
    drops = [(v0 - v1) - phi_min * (t1 - t0) for (t0, v0), (t1, v1) in zip(zip(ts, vals), zip(ts[1:], vals[1:]))]
    worst = min(drops)
    return Check("pressure decrement >= m_phi * step", worst >= -slack, f"worst excess {worst:.3g}")


def dp_matches_exhaustive(problem: CoverProblem) -> Check:
    """DP optimum vs exhaustive antichain search (small trees) or an exact MILP."""
    inst = cover_instance(problem, max_nodes=1 << 12)
    w = {u: math.exp(lw) for u, lw in inst.allowed.items()}
    dp = outer_measure(problem, force_explicit=True).log_value
    if len(inst.words) <= 64:
        best = min(math.fsum(w[u] for u in ch) for ch in inst.antichains())
        how = "antichain enumeration"
    else:
        best = _milp_cover(inst, w)
        how = "mixed-integer program"
    ok = math.isclose(math.log(best), dp, rel_tol=1e-9, abs_tol=1e-9)
    return Check(f"cover DP equals {how}", ok, f"{dp:.12f} vs {math.log(best):.12f}")


def _milp_cover(inst, w: dict) -> float:
    from scipy.optimize import Bounds, LinearConstraint, milp

    cands = sorted(inst.allowed, key=lambda u: (len(u), u))
    idx = {u: i for i, u in enumerate(cands)}
    mat = np.zeros((len(inst.leaves), len(cands)))
    for r, leaf in enumerate(inst.leaves):
        for u in inst.ancestors(leaf):
            mat[r, idx[u]] = 1.0
    c = np.array([w[u] for u in cands])
    res = milp(c, constraints=LinearConstraint(mat, lb=1.0), integrality=np.ones(len(cands)),
               bounds=Bounds(0, 1), options={"mip_rel_gap": 0.0})
    if not res.success:
        raise RuntimeError(f"milp failed: {res.message}")
    return float(res.fun)


# -- measures ------------------------------------------------------------------------------

def normalization(mu: MarkovMeasure, a: IncidenceMatrix, n_max: int = 12) -> Check:
    worst = 0.0
    for n in range(1, n_max + 1):
        total = math.fsum(cylinder_mass(mu, w).p for w in enumerate_words(a, n))
        worst = max(worst, abs(total - 1.0))
    return Check("cylinder masses sum to 1", worst <= 1e-10, f"max error {worst:.3g}")


def shift_invariance(mu: MarkovMeasure, a: IncidenceMatrix, n_max: int = 6) -> Check:
    worst = 0.0
    for n in range(1, n_max + 1):
        for w in enumerate_words(a, n):
            left = math.fsum(cylinder_mass(mu, (s,) + w).p for s in range(a.k))
            worst = max(worst, abs(left - cylinder_mass(mu, w).p))
    return Check("sum over a of mu([a w]) equals mu([w])", worst <= 1e-12, f"max error {worst:.3g}")
