"""Subshifts of finite type: incidence matrices, words, eventually periodic points.

Word counts follow the convention ``count_words(A, n) = #{admissible strings of
n symbols} = 1^T A^(n-1) 1``.  Sequences are indexed from 0 and the symbolic
metric is ``d(x, y) = exp(-j)`` with ``j`` the first index where ``x`` and
``y`` disagree, so ``d <= 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

Word = tuple[int, ...]


class EmptySubshiftError(ValueError):
    """Raised when a construction leaves no infinite admissible sequence."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative routine hits its iteration cap."""


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    """A k x k 0/1 matrix whose rows each contain at least one 1.

    ``labels`` optionally maps every symbol of this matrix to a word of some
    ambient alphabet (used by block presentations of sub-shifts).
    """

    rows: tuple[tuple[int, ...], ...]
    labels: tuple[Word, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        k = len(rows)
        if k == 0:
            raise ValueError("incidence matrix must have at least one symbol")
        for i, r in enumerate(rows):
            if len(r) != k:
                raise ValueError(f"row {i} has length {len(r)}, expected {k}")
            if any(v not in (0, 1) for v in r):
                raise ValueError(f"row {i} has entries outside {{0, 1}}")
            if not any(r):
                raise ValueError(f"row {i} is all zero")
        if self.labels is not None and len(self.labels) != k:
            raise ValueError("labels must have one entry per symbol")
        object.__setattr__(self, "rows", rows)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(tuple(w) for w in self.labels))

    @classmethod
    def from_array(cls, a, labels=None) -> IncidenceMatrix:
        return cls(tuple(tuple(int(v) for v in r) for r in np.asarray(a)), labels)

    @classmethod
    def full(cls, k: int) -> IncidenceMatrix:
        return cls(tuple((1,) * k for _ in range(k)))

    @classmethod
    def golden_mean(cls) -> IncidenceMatrix:
        return cls(((1, 1), (1, 0)))

    @property
    def k(self) -> int:
        return len(self.rows)

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.rows, dtype=np.int64)
        a.setflags(write=False)
        return a

    def __eq__(self, other):
        if not isinstance(other, IncidenceMatrix):
            return NotImplemented
        return self.rows == other.rows and self.labels == other.labels

    def __hash__(self):
        return hash((self.rows, self.labels))

    def __repr__(self):
        return f"IncidenceMatrix(k={self.k}, rows={[list(r) for r in self.rows]})"

    def allows(self, a: int, b: int) -> bool:
        return self.rows[a][b] == 1

    def is_admissible(self, word: Sequence[int]) -> bool:
        if any(not 0 <= s < self.k for s in word):
            return False
        return all(self.rows[a][b] for a, b in zip(word, word[1:]))

    def successors(self, a: int) -> list[int]:
        return [b for b, v in enumerate(self.rows[a]) if v]

    def is_irreducible(self) -> bool:
        return len(self.unreachable()) == 0

    def unreachable(self) -> list[tuple[int, int]]:
        """Pairs (i, j) with no path from i to j; empty iff irreducible."""
        reach = self.array.astype(bool) | np.eye(self.k, dtype=bool)
        for _ in range(self.k):
            reach = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
        path = self.array.astype(bool)
        path = (reach.astype(np.int64) @ path.astype(np.int64)) > 0
        return [(i, j) for i in range(self.k) for j in range(self.k) if not path[i, j]]

    # -- serialization -------------------------------------------------
    def to_json(self) -> str:
        """Canonical form, byte-stable for golden files."""
        doc = {"k": self.k, "rows": [list(r) for r in self.rows]}
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> IncidenceMatrix:
        doc = json.loads(text)
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: dict) -> IncidenceMatrix:
        if "rows" not in doc:
            raise ValueError("matrix document needs a 'rows' field")
        m = cls(tuple(tuple(r) for r in doc["rows"]))
        if "k" in doc and int(doc["k"]) != m.k:
            raise ValueError(f"'k'={doc['k']} disagrees with {m.k} rows")
        return m


def load_matrix(path) -> IncidenceMatrix:
    with open(path) as fh:
        return IncidenceMatrix.from_json(fh.read())


def load_forbidden(path) -> list[Word]:
    with open(path) as fh:
        doc = json.load(fh)
    return [tuple(int(s) for s in w) for w in doc["forbidden"]]


def forbidden_to_json(words: Iterable[Sequence[int]]) -> str:
    doc = {"forbidden": sorted([list(w) for w in words])}
    return json.dumps(doc, separators=(",", ":"), sort_keys=True)


@dataclass(frozen=True)
class SymbolicPoint:
    """Eventually periodic sequence ``preperiod . period . period . ...``.

    Canonicalized on construction (minimal period, minimal preperiod), so
    structural equality is sequence equality.
    """

    preperiod: Word = ()
    period: Word = field(default=(0,))

    def __post_init__(self):
        pre = tuple(int(s) for s in self.preperiod)
        per = tuple(int(s) for s in self.period)
        if not per:
            raise ValueError("period must be nonempty")
        p = len(per)
        for d in range(1, p + 1):
            if p % d == 0 and per == per[:d] * (p // d):
                per = per[:d]
                break
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def constant(cls, symbol: int) -> SymbolicPoint:
        return cls((), (symbol,))

    def __getitem__(self, j: int) -> int:
        if j < 0:
            raise IndexError(j)
        pre = self.preperiod
        if j < len(pre):
            return pre[j]
        return self.period[(j - len(pre)) % len(self.period)]

    def prefix(self, n: int) -> np.ndarray:
        """First ``n`` coordinates as an int array."""
        pre = np.asarray(self.preperiod, dtype=np.int64)
        if n <= len(pre):
            return pre[:n].copy()
        per = np.asarray(self.period, dtype=np.int64)
        reps = -(-(n - len(pre)) // len(per))
        return np.concatenate([pre, np.tile(per, reps)])[:n]

    def is_admissible(self, a: IncidenceMatrix) -> bool:
        word = self.preperiod + self.period + self.period[:1]
        return a.is_admissible(word)

    def shift(self, i: int = 1) -> SymbolicPoint:
        pre = self.preperiod
        if i <= len(pre):
            return SymbolicPoint(pre[i:], self.period)
        r = (i - len(pre)) % len(self.period)
        return SymbolicPoint((), self.period[r:] + self.period[:r])


def check_point(a: IncidenceMatrix, x: SymbolicPoint) -> None:
    if not x.is_admissible(a):
        raise ValueError(f"point {x} is not admissible for {a}")


# -- spectral radius -----------------------------------------------------

def _perron_root_irreducible(b: np.ndarray, tol: float, max_iter: int) -> float:
    """Perron root of an irreducible nonnegative matrix.

    Power iteration on ``B + cI`` (primitive, same Perron vector) with the
    Collatz-Wielandt bracket min_i (Bv)_i/v_i <= r <= max_i (Bv)_i/v_i as the
    stopping rule.  The shift c tracks the lower bracket end so the iteration
    stays fast when r is far from 1.  The bracket width is held to ``tol``
    absolutely when r >= 1 and relatively below that.
    """
    n = b.shape[0]
    if n == 1:
        return float(b[0, 0])
    v = np.ones(n)
    for _ in range(max_iter):
        w = b @ v
        ratios = w / v
        lo, hi = ratios.min(), ratios.max()
        if hi - lo <= 2 * tol * min(1.0, hi):
            return float(0.5 * (lo + hi))
        v = w + lo * v
        v = v / v.sum()
        if not np.all(v > 0):
            break
    raise ConvergenceError(f"power iteration did not converge within {max_iter} steps")


def perron_root(b, tol: float = 1e-12, max_iter: int = 1_000_000) -> float:
    """Spectral radius of a nonnegative square matrix.

    Reducible matrices are split into strongly connected components; the
    radius is the largest component radius.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("expected a square matrix")
    if np.any(b < 0):
        raise ValueError("expected a nonnegative matrix")
    ncomp, labels = connected_components(b > 0, directed=True, connection="strong")
    best = 0.0
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        sub = b[np.ix_(idx, idx)]
        if len(idx) == 1 and sub[0, 0] == 0:
            continue
        best = max(best, _perron_root_irreducible(sub, tol, max_iter))
    return best


def spectral_radius(a: IncidenceMatrix, tol: float = 1e-12, max_iter: int = 1_000_000) -> float:
    """r(A) to within ``tol``; raises ConvergenceError on hitting ``max_iter``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return perron_root(a.array, tol=tol, max_iter=max_iter)


# -- word counts -----------------------------------------------------------

def count_words(a: IncidenceMatrix, n: int, log: bool = False, max_bits: int | None = 1 << 20):
    """Number of admissible strings of ``n`` symbols.

    Exact mode returns a Python int; past ``max_bits`` bits it raises
    OverflowError and the caller should pass ``log=True``, which returns
    ``log #words`` via normalized matrix-vector products.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if log:
        return float(log_word_counts(a, n)[n - 1])
    rows = [a.successors(i) for i in range(a.k)]
    v = [1] * a.k
    for _ in range(n - 1):
        v = [sum(v[j] for j in rows[i]) for i in range(a.k)]
        if max_bits is not None and max(v).bit_length() > max_bits:
            raise OverflowError(f"word count for n={n} exceeds {max_bits} bits; use log=True")
    return sum(v)


def log_word_counts(a: IncidenceMatrix, max_len: int) -> np.ndarray:
    """Array ``out`` with ``out[n-1] = log count_words(a, n)`` for n = 1..max_len."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    m = a.array.astype(float)
    out = np.empty(max_len)
    # v stays a probability vector; the dropped mass accumulates in acc
    v = np.full(a.k, 1.0 / a.k)
    acc = math.log(a.k)
    out[0] = acc
    for n in range(2, max_len + 1):
        v = m @ v
        s = v.sum()
        acc += math.log(s)
        v /= s
        out[n - 1] = acc
    return out


def enumerate_words(a: IncidenceMatrix, n: int) -> list[Word]:
    """All admissible words of length ``n`` in lexicographic order."""
    words: list[Word] = [(s,) for s in range(a.k)]
    for _ in range(n - 1):
        words = [w + (b,) for w in words for b in a.successors(w[-1])]
    return words


# -- block presentations ---------------------------------------------------

def _prune_dead(adj: dict, nodes: list) -> list:
    live = set(nodes)
    changed = True
    while changed:
        changed = False
        for u in list(live):
            if not any(v in live for v in adj[u]):
                live.discard(u)
                changed = True
    return [u for u in nodes if u in live]


def block_presentation(a: IncidenceMatrix, m: int, forbidden: Iterable[Sequence[int]] = ()) -> IncidenceMatrix:
    """Incidence matrix on admissible ``m``-blocks, labels = the blocks.

    Edge u -> v iff u[1:] == v[:-1] and the (m+1)-word u + v[-1:] is not in
    ``forbidden`` (forbidden words must have length m + 1).  Blocks with no
    infinite forward continuation are pruned.
    """
    if m < 1:
        raise ValueError("block length must be >= 1")
    forb = {tuple(w) for w in forbidden}
    if any(len(w) != m + 1 for w in forb):
        raise ValueError(f"forbidden words must all have length {m + 1}")
    blocks = enumerate_words(a, m)
    by_prefix: dict[Word, list[Word]] = {}
    for b in blocks:
        by_prefix.setdefault(b[:-1], []).append(b)
    adj = {}
    for u in blocks:
        adj[u] = [v for v in by_prefix.get(u[1:], [])
                  if a.allows(u[-1], v[-1]) and (u + v[-1:]) not in forb]
    live = _prune_dead(adj, blocks)
    if not live:
        raise EmptySubshiftError("no infinite admissible sequence survives")
    index = {u: i for i, u in enumerate(live)}
    rows = []
    for u in live:
        r = [0] * len(live)
        for v in adj[u]:
            if v in index:
                r[index[v]] = 1
        rows.append(tuple(r))
    return IncidenceMatrix(tuple(rows), tuple(live))


def higher_block_matrix(a: IncidenceMatrix, forbidden: Iterable[Sequence[int]]) -> IncidenceMatrix:
    """Sub-SFT of ``a`` avoiding ``forbidden`` words, on (l-1)-blocks.

    All forbidden words must be admissible in ``a`` and share a length l >= 2.
    With no forbidden words this is ``a`` itself with single-symbol labels.
    """
    forb = [tuple(int(s) for s in w) for w in forbidden]
    if not forb:
        return block_presentation(a, 1)
    lengths = {len(w) for w in forb}
    if len(lengths) != 1:
        raise ValueError("forbidden words must have a uniform length")
    ell = lengths.pop()
    if ell < 2:
        raise ValueError("forbidden words must have length >= 2")
    for w in forb:
        if not a.is_admissible(w):
            raise ValueError(f"forbidden word {w} is not admissible")
    return block_presentation(a, ell - 1, forb)
