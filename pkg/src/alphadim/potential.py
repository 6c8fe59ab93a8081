"""Locally constant potentials on subshifts of finite type."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from .symbolic import IncidenceMatrix, SymbolicPoint, Word, enumerate_words


@dataclass(frozen=True, eq=False)
class Potential:
    """phi(x) = table[x_0 .. x_{m-1}] for an order-m potential.

    ``positive`` is a declared flag: when set, every table value must be > 0.
    """

    matrix: IncidenceMatrix
    order: int
    table: Mapping[Word, float]
    positive: bool = False

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        words = enumerate_words(self.matrix, self.order)
        table = {}
        for w in words:
            if w not in self.table:
                raise ValueError(f"potential has no value for admissible word {w}")
            v = float(self.table[w])
            if not math.isfinite(v):
                raise ValueError(f"potential value for {w} is not finite")
            table[w] = v
        if self.positive and min(table.values()) <= 0:
            raise ValueError("positivity flag set but some value is <= 0")
        object.__setattr__(self, "table", table)

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, a: IncidenceMatrix, c: float) -> Potential:
        return cls(a, 1, {(s,): float(c) for s in range(a.k)}, positive=c > 0)

    @classmethod
    def from_symbol_values(cls, a: IncidenceMatrix, values: Sequence[float]) -> Potential:
        if len(values) != a.k:
            raise ValueError("need one value per symbol")
        vals = [float(v) for v in values]
        return cls(a, 1, {(s,): v for s, v in enumerate(vals)}, positive=min(vals) > 0)

    @classmethod
    def from_function(cls, a: IncidenceMatrix, order: int, fn: Callable[[Word], float]) -> Potential:
        table = {w: float(fn(w)) for w in enumerate_words(a, order)}
        return cls(a, order, table, positive=min(table.values()) > 0)

    @classmethod
    def random(cls, a: IncidenceMatrix, order: int, low: float, high: float, rng) -> Potential:
        words = enumerate_words(a, order)
        vals = rng.uniform(low, high, size=len(words))
        return cls(a, order, dict(zip(words, vals.tolist())), positive=low > 0)

    # -- basic quantities ----------------------------------------------------
    @cached_property
    def min(self) -> float:
        return min(self.table.values())

    @cached_property
    def max(self) -> float:
        return max(self.table.values())

    @property
    def norm(self) -> float:
        return max(abs(self.min), abs(self.max))

    @property
    def is_constant(self) -> bool:
        return self.min == self.max

    def value(self, word: Sequence[int]) -> float:
        return self.table[tuple(word[: self.order])]

    def scaled(self, c: float) -> Potential:
        table = {w: c * v for w, v in self.table.items()}
        return Potential(self.matrix, self.order, table, positive=min(table.values()) > 0)

    def __neg__(self) -> Potential:
        return self.scaled(-1.0)

    def __mul__(self, c: float) -> Potential:
        return self.scaled(float(c))

    __rmul__ = __mul__

    def lift(self, order: int) -> Potential:
        """Same function written as an order-``order`` table."""
        if order < self.order:
            raise ValueError("cannot lower the order of a potential")
        if order == self.order:
            return self
        table = {w: self.table[w[: self.order]] for w in enumerate_words(self.matrix, order)}
        return Potential(self.matrix, order, table, self.positive)

    def __add__(self, other: Potential) -> Potential:
        m = max(self.order, other.order)
        a, b = self.lift(m), other.lift(m)
        table = {w: a.table[w] + b.table[w] for w in a.table}
        return Potential(self.matrix, m, table, positive=min(table.values()) > 0)

    def __sub__(self, other: Potential) -> Potential:
        return self + (-other)

    def sup_distance(self, other: Potential) -> float:
        """||self - other|| in the sup norm."""
        return (self - other).norm

    def symbol_values(self) -> np.ndarray:
        """Values of an order-1 potential as a length-k array."""
        if self.order != 1:
            raise ValueError("symbol_values needs an order-1 potential")
        return np.array([self.table[(s,)] for s in range(self.matrix.k)])

    # -- Birkhoff sums ---------------------------------------------------------
    def window_values(self, seq: Sequence[int]) -> np.ndarray:
        """phi of every complete order-m window of ``seq``."""
        m = self.order
        return np.array([self.table[tuple(seq[j: j + m])] for j in range(len(seq) - m + 1)])

    def birkhoff(self, x: SymbolicPoint, n: int) -> float:
        """S_n phi(x) = sum_{j<n} phi(sigma^j x)."""
        seq = x.prefix(n + self.order - 1).tolist()
        return math.fsum(self.window_values(seq)[:n])

    def period_average(self, x: SymbolicPoint) -> float:
        """Asymptotic mean of phi along x (the mean over one period)."""
        p = len(x.period)
        start = len(x.preperiod)
        seq = x.prefix(start + p + self.order - 1).tolist()[start:]
        return math.fsum(self.window_values(seq)[:p]) / p

    def extremal_birkhoff(self, word: Sequence[int], n: int, sign: int = 1) -> float:
        """sup (sign=1) or inf (sign=-1) of S_n phi over the cylinder [word]."""
        m = self.order
        word = tuple(word)
        need = n + m - 1
        full = min(len(word), need)
        base = math.fsum(self.window_values(word[:full])[:n]) if full >= m else 0.0
        if len(word) >= need:
            return base
        # extend symbol by symbol, keyed on the last max(m-1, 1) symbols
        keep = max(m - 1, 1)
        pick = max if sign > 0 else min
        states: dict[Word, float] = {word[-keep:]: 0.0}
        for length in range(len(word), need):
            nxt: dict[Word, float] = {}
            j = length + 1 - m    # window completed by the appended symbol
            for tail, acc in states.items():
                for b in self.matrix.successors(tail[-1]):
                    ext = tail + (b,)
                    val = acc + self.table[ext[-m:]] if 0 <= j < n else acc
                    key = ext[-keep:]
                    nxt[key] = pick(nxt[key], val) if key in nxt else val
            states = nxt
        return base + pick(states.values())

    def center(self, word: Sequence[int], length: int) -> tuple[int, ...]:
        """Canonical center: ``word`` extended by the smallest admissible symbol."""
        w = list(word)
        while len(w) < length:
            w.append(self.matrix.successors(w[-1])[0])
        return tuple(w)

    def center_birkhoff(self, word: Sequence[int], n: int) -> float:
        seq = self.center(word, n + self.order - 1)
        return math.fsum(self.window_values(seq[: n + self.order - 1])[:n])

    def modulus(self, eps: float) -> float:
        """gamma(eps) = sup{|phi(x) - phi(y)| : d(x, y) < eps}.

        d(x, y) < eps means agreement on the first floor(ln 1/eps) + 1 symbols.
        """
        from .geometry import _snap_floor

        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        depth = _snap_floor(-math.log(eps)) + 1
        if depth >= self.order:
            return 0.0
        groups: dict[Word, list[float]] = {}
        for w, v in self.table.items():
            groups.setdefault(w[:depth], []).append(v)
        return max(max(g) - min(g) for g in groups.values())
