"""Exact rational simplex for small covering linear programs."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

MAX_ROWS = 512


class LPTooLarge(ValueError):
    pass


def solve_covering_lp(rows: Sequence[Sequence[int]], weights: Sequence[Fraction]) -> tuple[Fraction, list[Fraction]]:
    """min w.c  s.t.  sum_{j in row} c_j >= 1 for every row,  c >= 0.

    Solved through the dual  max 1.y  s.t.  M^T y <= w,  y >= 0, whose origin
    is feasible because every weight is positive.  Bland's rule prevents
    cycling; the primal solution is read off the slack reduced costs.
    """
    uniq = sorted({tuple(sorted(set(r))) for r in rows})
    if any(not r for r in uniq):
        raise ValueError("a covering row has no candidate: the LP is infeasible")
    if len(uniq) > MAX_ROWS:
        raise LPTooLarge(f"{len(uniq)} distinct covering rows exceed the exact-simplex limit of {MAX_ROWS}")
    w = [Fraction(x) for x in weights]
    if any(x <= 0 for x in w):
        raise ValueError("weights must be positive")
    m, p = len(w), len(uniq)       # dual constraints (one per candidate), dual variables (one per row)
    ncol = p + m
    tab = [[Fraction(0)] * ncol + [w[j]] for j in range(m)]
    for i, r in enumerate(uniq):
        for j in r:
            tab[j][i] = Fraction(1)
    for j in range(m):
        tab[j][p + j] = Fraction(1)
    obj = [Fraction(-1)] * p + [Fraction(0)] * m + [Fraction(0)]
    basis = [p + j for j in range(m)]

    while True:
        enter = next((c for c in range(ncol) if obj[c] < 0), None)
        if enter is None:
            break
        best = None
        for rix in range(m):
            a = tab[rix][enter]
            if a > 0:
                ratio = tab[rix][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[rix] < basis[best[1]]):
                    best = (ratio, rix)
        if best is None:
            raise ValueError("dual LP is unbounded: the covering LP is infeasible")
        prow = best[1]
        piv = tab[prow][enter]
        tab[prow] = [x / piv for x in tab[prow]]
        pr = tab[prow]
        for rix in range(m):
            if rix != prow:
                f = tab[rix][enter]
                if f:
                    tab[rix] = [x - f * y for x, y in zip(tab[rix], pr)]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, pr)]
        basis[prow] = enter

    coef = [obj[p + j] for j in range(m)]
    return obj[-1], coef
