"""Acceptance suite: twelve criteria, each reported as one PASS/FAIL line."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import properties as prop
from .caratheodory import (
    CoverProblem,
    bs_dimension_report,
    critical_exponent,
    pressure_value,
    transfer_pressure,
    weighted_cover_min,
)
from .estimators import (
    alpha_entropy_estimate,
    double_limit_experiment,
    make_system,
    neutralized_gap,
)
from .geometry import alpha_entropy_sft, hausdorff_dimension_sft
from .measures import (
    MarkovMeasure,
    bk_entropy_of_measure,
    integrated_bk_entropy,
    local_bk_entropy_empirical,
    local_bk_entropy_exact,
)
from .potential import Potential
from .symbolic import IncidenceMatrix, SymbolicPoint, spectral_radius
from .thermo import (
    bernoulli_family,
    classical_pressure,
    level_set_entropy,
    parry_measure,
    pressure_derivative,
)

E1 = math.exp(-1.0)
LOG2 = math.log(2.0)


def reference_matrices() -> dict[str, IncidenceMatrix]:
    return {"full2": IncidenceMatrix.full(2), "golden": IncidenceMatrix.golden_mean()}


@dataclass
class Result:
    number: int
    title: str
    checks: list[prop.Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(prop.Check(name, bool(ok), detail))

    def line(self) -> str:
        bad = [c for c in self.checks if not c.ok]
        note = f"{len(self.checks)} checks" if not bad else f"{len(bad)}/{len(self.checks)} failed, first: {bad[0].name} ({bad[0].detail})"
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.title}: {note} ({self.seconds:.1f}s)"


# -- 1..10: symbolic systems ----------------------------------------------------------------

def criterion_1() -> Result:
    r = Result(1, "SFT alpha-entropy at n=200 within 0.02 of (1+alpha) log r(A)")
    for name, a in reference_matrices().items():
        target_r = math.log(spectral_radius(a))
        for alpha in (0.0, 0.5, 1.0, 2.0):
            t = time.perf_counter()
            est = alpha_entropy_sft(a, alpha, E1, (1, 200)).limit
            dt = time.perf_counter() - t
            target = (1 + alpha) * target_r
            r.add(f"{name} alpha={alpha}", abs(est - target) <= 0.02 and dt < 5.0,
                  f"{est:.6f} vs {target:.6f}, {dt:.2f}s")
    return r


def criterion_2() -> Result:
    r = Result(2, "cylinder-cover Hausdorff exponent at depth 30 within 0.02 of log r(A)")
    for name, a in reference_matrices().items():
        d = hausdorff_dimension_sft(a, depth=30)
        target = math.log(spectral_radius(a))
        r.add(name, abs(d - target) <= 0.02, f"{d:.6f} vs {target:.6f}")
    return r


def criterion_3() -> Result:
    r = Result(3, "golden sub-SFT of the 2-shift: alpha-Bowen entropy / Hausdorff dimension within 0.05 of 1+alpha")
    a = IncidenceMatrix.full(2)
    sub = [(1, 1)]
    dim_h = hausdorff_dimension_sft(a, sub, depth=30)
    for alpha in (0.0, 0.5, 1.0):
        h = critical_exponent(CoverProblem(a, sub, alpha=alpha, n_min=20, n_max=40), tol=1e-8)
        ratio = h / dim_h
        r.add(f"alpha={alpha}", abs(ratio - (1 + alpha)) <= 0.05, f"ratio {ratio:.5f}")
    return r


def criterion_4() -> Result:
    r = Result(4, "Bowen root for constant phi: transfer within 1e-3, cover DP within 0.05, strict decrease")
    for name, a in reference_matrices().items():
        log_r = math.log(spectral_radius(a))
        for c in (0.5, 1.0, 2.0):
            phi = Potential.constant(a, c)
            for alpha in (0.0, 0.5, 1.0):
                target = (1 + alpha) * log_r / c
                tr = bs_dimension_report(a, alpha, phi, method="transfer", tol=1e-10)
                r.add(f"{name} c={c} alpha={alpha} transfer", abs(tr.root - target) <= 1e-3,
                      f"{tr.root:.8f} vs {target:.8f}")
                cv = bs_dimension_report(a, alpha, phi, scales=(20, 40), method="cover", tol=1e-6)
                r.add(f"{name} c={c} alpha={alpha} cover", abs(cv.root - target) <= 0.05,
                      f"{cv.root:.6f} vs {target:.6f}")
                steps = np.diff(cv.grid_t)
                drops = -np.diff(cv.grid_pressure)
                worst = float(np.min(drops - c * steps))
                r.add(f"{name} c={c} alpha={alpha} decrement", worst >= -0.01 and np.all(drops > 0),
                      f"min(drop - m*l) = {worst:.3g}")
    return r


def criterion_5() -> Result:
    r = Result(5, "variational principle on the 2-shift, phi=1: sup over Parry and Bernoulli grid equals the Bowen root")
    a = IncidenceMatrix.full(2)
    one = Potential.constant(a, 1.0)
    family = [parry_measure(a)] + bernoulli_family(a, 99)
    for alpha in (0.0, 0.5, 1.0):
        root = bs_dimension_report(a, alpha, one, method="transfer", tol=1e-12).root
        cover_root = bs_dimension_report(a, alpha, one, scales=(20, 40), method="cover").root
        vals = [bk_entropy_of_measure(mu, alpha, one) for mu in family]
        best = max(vals)
        r.add(f"alpha={alpha} sup matches", abs(best - root) <= 0.03, f"{best:.8f} vs {root:.8f} (cover {cover_root:.6f})")
        r.add(f"alpha={alpha} no member above", all(v <= root + 1e-9 for v in vals), f"max excess {best - root:.3g}")
    return r


def criterion_6() -> Result:
    r = Result(6, "local alpha-Brin-Katok entropy: exact, empirical n=1e4, Monte Carlo")
    a = IncidenceMatrix.full(2)
    one = Potential.constant(a, 1.0)
    fair = MarkovMeasure.bernoulli([0.5, 0.5])
    rng = np.random.default_rng(6)
    for alpha in (0.0, 0.5, 1.0):
        target = (1 + alpha) * LOG2
        for _ in range(3):
            x = prop._random_point(a, rng, int(rng.integers(0, 6)), int(rng.integers(1, 8)))
            v = local_bk_entropy_exact(fair, x, alpha, one)
            r.add(f"exact alpha={alpha} x={x.preperiod}|{x.period}", abs(v - target) <= 1e-12, f"{v!r}")
        x = prop._random_point(a, rng, 3, 17)
        emp = local_bk_entropy_empirical(fair, x, alpha, one, E1, 10_000)
        r.add(f"empirical alpha={alpha}", abs(emp - target) <= 0.02, f"{emp:.6f} vs {target:.6f}")
    q = MarkovMeasure.bernoulli([0.25, 0.75])
    h = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
    for alpha in (0.0, 1.0):
        est = integrated_bk_entropy(q, alpha, one, samples=100, seed=2024)
        target = (1 + alpha) * h
        r.add(f"Monte Carlo alpha={alpha}", abs(est.mean - target) <= 2 * est.stderr,
              f"{est.mean:.6f} +- {est.stderr:.2g} vs {target:.6f}")
    return r


def random_tiny_problem(rng: np.random.Generator, max_depth: int = 5) -> dict:
    """Random small cover instance: matrix, mode, potential, scales with depth <= max_depth."""
    from .geometry import cylinder_length

    mats = [IncidenceMatrix.full(2), IncidenceMatrix.golden_mean(), IncidenceMatrix.full(3),
            IncidenceMatrix.from_array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])]
    if max_depth > 6:
        mats = mats[:2]         # deep trees stay within the exhaustive oracle's node limit
    a = mats[int(rng.integers(len(mats)))]
    mode = ("dimension", "pressure", "hausdorff")[int(rng.integers(3))]
    alpha = float(rng.choice([0.0, 0.5, 1.0]))
    eps = float(rng.uniform(0.15, 0.9))
    if mode == "hausdorff":
        n_min = int(rng.integers(1, max_depth + 1))
        n_max = int(rng.integers(n_min, max_depth + 1))
    else:
        ok = [n for n in range(1, max_depth + 1) if cylinder_length(n, alpha, eps) <= max_depth]
        if not ok:
            eps, alpha, ok = 0.9, 0.0, [1, 2, 3]
        n_min = int(rng.choice(ok))
        n_max = int(rng.choice([n for n in ok if n >= n_min]))
    order = int(rng.integers(1, 3))
    lo = 0.5 if mode == "dimension" else -1.0
    phi = Potential.random(a, order, lo, lo + 1.5, rng)
    s = float(rng.uniform(0.0, 1.5))
    return dict(a=a, s=s, eps=eps, alpha=alpha, n_min=n_min, n_max=n_max,
                potential=None if mode == "hausdorff" else phi,
                weight_convention=("sup", "center")[int(rng.integers(2))], mode=mode)


def criterion_7(instances: int = 50, seed: int = 7) -> Result:
    r = Result(7, "fractional cover LP optimum equals the integer DP optimum exactly (rational arithmetic)")
    rng = np.random.default_rng(seed)
    for i in range(instances):
        kw = random_tiny_problem(rng)
        res = weighted_cover_min(**kw)
        ok = isinstance(res.value, Fraction) and res.value == res.dp_value
        r.add(f"instance {i} ({kw['mode']}, n={kw['n_min']}..{kw['n_max']})", ok,
              f"LP {float(res.value):.12g} vs DP {float(res.dp_value):.12g}")
    return r


def criterion_8(instances: int = 20, seed: int = 8) -> Result:
    r = Result(8, "sup-weight and center-weight values sandwich each other (tolerance 1e-9, log domain)")
    rng = np.random.default_rng(seed)
    mats = [IncidenceMatrix.full(2), IncidenceMatrix.golden_mean()]
    for i in range(instances):
        a = mats[i % 2]
        order = int(rng.integers(1, 4))
        phi = Potential.random(a, order, 1.0, 1.3, rng)
        eps = float(rng.uniform(0.4, 0.9))
        alpha = float(rng.choice([0.0, 0.5, 1.0]))
        n_max = int(rng.integers(3, 6))
        n_min = int(rng.integers(1, n_max + 1))
        p = CoverProblem(a, None, float(rng.uniform(0.2, 1.0)), eps, alpha, n_min, n_max, phi)
        c = prop.weight_convention(p, tol=1e-9)
        r.add(f"instance {i} (order {order})", c.ok, c.detail)
    return r


def criterion_9() -> Result:
    r = Result(9, "neutralized entropy of the 2-shift near log 2 while the alpha=1 entropy is about 2 log 2")
    g = neutralized_gap(IncidenceMatrix.full(2), (0.5, 0.25, 0.125), alpha=1.0)
    r.add("neutralized limit", abs(g.neutralized - LOG2) <= 0.05, f"{g.neutralized:.6f}")
    r.add("alpha=1 entropy", g.alpha_entropy >= 1.9 * LOG2, f"{g.alpha_entropy:.6f}")
    r.add("gap", g.gap >= 0.9 * LOG2, f"{g.gap:.6f}")
    return r


def criterion_10() -> Result:
    r = Result(10, "double limit alpha -> 0 then eps -> 0 on the 2-shift within 0.05 of log 2")
    d = double_limit_experiment(IncidenceMatrix.full(2), (1.0, 0.5, 0.25), (math.exp(-1), math.exp(-2), math.exp(-3)), n=200)
    r.add("corner", abs(d.corner - LOG2) <= 0.05, f"{d.corner:.6f}")
    r.add("ordering h^0 <= h^alpha", d.ordering_ok, "checked on the grid")
    return r


# -- 11: estimators ---------------------------------------------------------------------------

def criterion_11(m: int = 1 << 16) -> Result:
    r = Result(11, "grid estimators: doubling slope ~ log 2 + alpha, rotation slope ~ alpha, < 60 s each")
    for alpha in (0.0, 1.0):
        t = time.perf_counter()
        est = alpha_entropy_estimate(make_system("doubling", m), alpha, 0.2, (1, 14), m, seed=11)
        dt = time.perf_counter() - t
        target = LOG2 + alpha
        r.add(f"doubling alpha={alpha}", abs(est.slope - target) <= 0.1 and dt < 60,
              f"{est.slope:.4f} vs {target:.4f}, {dt:.1f}s")
    for alpha in (0.0, 0.5, 1.0):
        t = time.perf_counter()
        est = alpha_entropy_estimate(make_system("rotation", m), alpha, 0.2, (1, 14), m, seed=11)
        dt = time.perf_counter() - t
        r.add(f"rotation alpha={alpha}", abs(est.slope - alpha) <= 0.05 and dt < 60,
              f"{est.slope:.4f} vs {alpha}, {dt:.1f}s")
    return r


# -- 12: invariant suites ----------------------------------------------------------------------

def criterion_12(seed: int = 12) -> Result:
    r = Result(12, "invariant and property suites")
    rng = np.random.default_rng(seed)
    mats = reference_matrices()
    a2, gm = mats["full2"], mats["golden"]

    # symbolic core
    for a in mats.values():
        r.checks += [prop.submultiplicativity(a), prop.count_convergence(a)]
    for k in (2, 3, 4):
        for _ in range(2):
            arr = (rng.random((k, k)) < 0.7).astype(int)
            arr[np.arange(k), rng.integers(0, k, size=k)] = 1
            r.checks.append(prop.count_matches_brute_force(IncidenceMatrix.from_array(arr)))

    # geometry
    for a in mats.values():
        for alpha in (0.0, 0.5, 2.0):
            r.checks.append(prop.metric_axioms(a, int(rng.integers(1, 9)), alpha, rng, trials=30))
    r.checks.append(prop.offset_length_bounds())
    r.checks.append(prop.corrected_sandwich())
    for a in mats.values():
        for n in (1, 3, 5, 8):
            for alpha in (0.0, 0.5, 1.0, 2.0):
                for eps in (E1, math.exp(-2), 0.5):
                    r.checks.append(prop.ball_matches_brute_force(a, n, alpha, eps, rng))
    for a in mats.values():
        for alpha in (0.0, 1.0):
            r.checks.append(prop.bowen_below_entropy(a, alpha))

    # cover values
    r.checks.append(prop.monotone_in_s(CoverProblem(gm, alpha=0.5, n_min=5, n_max=20), np.linspace(0, 2, 21)))
    r.checks.append(prop.monotone_in_s(
        CoverProblem(a2, alpha=0.5, n_min=2, n_max=5, potential=Potential.random(a2, 2, 1.0, 2.0, rng)),
        np.linspace(0, 2, 11)))
    r.checks.append(prop.monotone_in_nmin(CoverProblem(gm, s=0.5, alpha=0.5, n_max=15)))
    r.checks.append(prop.union_properties(IncidenceMatrix.full(3), [(0, 0)], [(1, 2), (2, 1)]))
    r.checks.append(prop.union_properties(a2, [(1, 1)], [(0, 0)], alpha=1.0))
    for a in mats.values():
        phi = Potential.random(a, 2, 1.0, 2.0, rng)
        r.checks.append(prop.dimension_sandwich(a, phi, 0.5, 3, 6))
        h1, h2 = Potential.random(a, 1, -1.0, 1.0, rng), Potential.random(a, 2, -1.0, 1.0, rng)
        r.checks.append(prop.pressure_lipschitz(a, h1, h2, 0.5, 3, 6))
        r.checks.append(prop.pressure_sandwich(a, h2, 0.5, 3, 6))
        phi1 = Potential.random(a, 1, 0.5, 1.5, rng)
        ts = list(np.linspace(0.0, 3.0, 13))
        r.checks.append(prop.decrement_bound(lambda t: transfer_pressure(a, 0.5, phi1.scaled(-t)), phi1.min, ts, 1e-9))
        r.checks.append(prop.decrement_bound(
            lambda t: pressure_value(a, 0.5, phi1.scaled(-t), n_min=3, n_max=6, tol=1e-10), phi1.min, ts, 1e-8))
    # weight convention equivalence is criterion 8; brute-force DP equivalence up to depth 10
    for i in range(12):
        kw = random_tiny_problem(rng, max_depth=10 if i % 2 else 5)
        a = kw.pop("a")
        r.checks.append(prop.dp_matches_exhaustive(CoverProblem(a, **kw)))
    r.checks.append(prop.dp_matches_exhaustive(
        CoverProblem(gm, s=math.log(spectral_radius(gm)), mode="hausdorff", n_min=6, n_max=10)))

    # thermodynamics
    for a in mats.values():
        g = Potential.from_symbol_values(a, [0.0, 1.0])
        ts = np.linspace(-4, 4, 33)
        ps = np.array([classical_pressure(a, g, t) for t in ts])
        r.add("classical pressure convex in t", bool(np.all(np.diff(ps, 2) >= -1e-12)), f"{len(ts)} points")
        parry = parry_measure(a)
        s_par = parry.mean([0.0, 1.0])
        sp = level_set_entropy(a, g, s_par)
        r.add("Legendre value at the Parry mean is log r(A)", abs(sp.entropy - math.log(spectral_radius(a))) <= 1e-6,
              f"{sp.entropy:.9f}")
        sp = level_set_entropy(a, g, 0.7 * s_par)
        d = pressure_derivative(a, g, sp.t_star)
        r.add("first-order condition at t*", abs(d - 0.7 * s_par) <= 1e-6, f"P'(t*) = {d:.9f}")
    for alpha in (0.0, 1.0):
        fam = [parry_measure(a2)] + bernoulli_family(a2, 99)
        best = max((1 + alpha) * mu.entropy for mu in fam)
        lim = alpha_entropy_sft(a2, alpha, E1, (1, 200)).extrapolated
        r.add(f"variational sup matches entropy (alpha={alpha})", abs(best - lim) <= 0.02, f"{best:.6f} vs {lim:.6f}")

    # measures
    pm = MarkovMeasure(parry_measure(gm).transition, parry_measure(gm).stationary, gm)
    for mu, a in ((MarkovMeasure.bernoulli([0.3, 0.7]), a2), (pm, gm)):
        r.checks += [prop.normalization(mu, a), prop.shift_invariance(mu, a)]
    one = Potential.constant(a2, 1.0)
    for alpha in (0.0, 1.0):
        est = integrated_bk_entropy(MarkovMeasure.bernoulli([0.5, 0.5]), alpha, one, samples=20, seed=5)
        target = (1 + alpha) * LOG2
        r.add(f"typical local entropy (alpha={alpha})", abs(est.mean - target) <= max(3 * est.stderr, 1e-9),
              f"{est.mean:.9f}")
        crit = critical_exponent(CoverProblem(a2, alpha=alpha, n_min=20, n_max=40), tol=1e-8)
        r.add(f"Billingsley directions (alpha={alpha})", abs(crit - target) <= 0.02, f"{crit:.6f} vs {target:.6f}")
    # variational principle on the golden sub-SFT of the 2-shift
    gone = Potential.constant(gm, 1.0)
    for alpha in (0.0, 0.5):
        root = critical_exponent(CoverProblem(a2, [(1, 1)], alpha=alpha, n_min=20, n_max=40), tol=1e-8)
        fam = [parry_measure(gm)] + [MarkovMeasure.from_transition([[1 - p, p], [1, 0]]) for p in np.linspace(0.05, 0.95, 19)]
        vals = [bk_entropy_of_measure(mu, alpha, gone) for mu in fam]
        r.add(f"sub-SFT variational principle (alpha={alpha})",
              abs(max(vals) - root) <= 0.03 and max(vals) <= root + 0.03, f"{max(vals):.6f} vs {root:.6f}")

    # estimators
    m = 1 << 12
    doub = make_system("doubling", m)
    from .estimators import greedy_spanning
    sizes_n = [greedy_spanning(doub, n, 0.5, 0.2, 3, m).size for n in range(1, 8)]
    sizes_a = [greedy_spanning(doub, 4, al, 0.2, 3, m).size for al in (0.0, 0.5, 1.0)]
    sizes_r = [greedy_spanning(doub, 4, 0.5, rad, 3, m).size for rad in (0.05, 0.1, 0.2, 0.4)]
    r.add("spanning size nondecreasing in n", sizes_n == sorted(sizes_n), str(sizes_n))
    r.add("spanning size nondecreasing in alpha", sizes_a == sorted(sizes_a), str(sizes_a))
    r.add("spanning size nonincreasing in radius", sizes_r == sorted(sizes_r, reverse=True), str(sizes_r))
    shift = make_system("shift", m)
    for alpha in (0.0, 1.0):
        est = alpha_entropy_estimate(shift, alpha, E1, (1, 14), m)
        ref = (1 + alpha) * LOG2
        r.add(f"binary-shift estimator matches the SFT value (alpha={alpha})", abs(est.slope - ref) <= 0.05,
              f"{est.slope:.5f} vs {ref:.5f}")
        crit = critical_exponent(CoverProblem(a2, alpha=alpha, n_min=20, n_max=40), tol=1e-8)
        r.add(f"cover exponent <= estimator slope + 0.05 (alpha={alpha})", crit <= est.slope + 0.05,
              f"{crit:.5f} vs {est.slope:.5f}")
    e1 = alpha_entropy_estimate(doub, 0.5, 0.2, (1, 10), m, seed=9)
    e2 = alpha_entropy_estimate(doub, 0.5, 0.2, (1, 10), m, seed=9)
    r.add("estimator determinism", np.array_equal(e1.log_sizes, e2.log_sizes) and e1.slope == e2.slope, "same seed")

    # command line
    from .cli import idempotence_check
    r.checks.append(idempotence_check())
    return r


CRITERIA: dict[int, Callable[[], Result]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
}

SUITES = {
    "sft": list(range(1, 11)),
    "estimators": [11],
    "properties": [12],
    "all": list(range(1, 13)),
}


def run_criterion(number: int) -> Result:
    t = time.perf_counter()
    res = CRITERIA[number]()
    res.seconds = time.perf_counter() - t
    return res


def run_suite(name: str, echo: Callable[[str], None] | None = print) -> list[Result]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    out = []
    for n in SUITES[name]:
        res = run_criterion(n)
        if echo:
            echo(res.line())
        out.append(res)
    return out
