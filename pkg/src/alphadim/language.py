"""Deterministic automata for the languages of SFTs, sub-SFTs and their unions.

A cover problem only needs the tree of words of the target set; two words that
reach the same automaton state have isomorphic subtrees, which is what makes
the depth-by-state dynamic program exact.  Every state is live (has an
infinite continuation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .symbolic import IncidenceMatrix, Word, higher_block_matrix


@dataclass(frozen=True, eq=False)
class Language:
    ambient: IncidenceMatrix
    states: tuple[Hashable, ...]
    edges: tuple[tuple[tuple[int, int], ...], ...]   # state -> ((symbol, next), ...)
    root: int = 0

    def step(self, q: int, symbol: int) -> int | None:
        for a, r in self.edges[q]:
            if a == symbol:
                return r
        return None

    def accepts(self, word: Sequence[int]) -> bool:
        q = self.root
        for s in word:
            q = self.step(q, s)
            if q is None:
                return False
        return True

    def transfer(self) -> np.ndarray:
        """Multiplicity matrix T[q, r] = #symbols leading q -> r."""
        t = np.zeros((len(self.states), len(self.states)))
        for q, out in enumerate(self.edges):
            for _, r in out:
                t[q, r] += 1
        return t

    def words(self, n: int) -> list[Word]:
        out: list[tuple[Word, int]] = [((), self.root)]
        for _ in range(n):
            out = [(w + (a,), r) for w, q in out for a, r in self.edges[q]]
        return [w for w, _ in out]

    def count(self, n: int) -> int:
        v = {self.root: 1}
        for _ in range(n):
            nxt: dict[int, int] = {}
            for q, c in v.items():
                for _, r in self.edges[q]:
                    nxt[r] = nxt.get(r, 0) + c
            v = nxt
        return sum(v.values())


def _build(ambient: IncidenceMatrix, root, successors) -> Language:
    index = {root: 0}
    states = [root]
    edges: list[tuple] = []
    i = 0
    while i < len(states):
        out = []
        for a, nxt in successors(states[i]):
            if nxt not in index:
                index[nxt] = len(states)
                states.append(nxt)
            out.append((a, index[nxt]))
        edges.append(tuple(sorted(out)))
        i += 1
    return Language(ambient, tuple(states), tuple(edges), 0)


def full_language(a: IncidenceMatrix) -> Language:
    def succ(q):
        if q == ():
            return [(s, (s,)) for s in range(a.k)]
        return [(b, (b,)) for b in a.successors(q[0])]
    return _build(a, (), succ)


def sub_language(ambient: IncidenceMatrix, blocks: IncidenceMatrix) -> Language:
    """Language of a block-presented sub-SFT (``blocks.labels`` are ambient words)."""
    if blocks.labels is None:
        raise ValueError("sub-SFT must carry block labels")
    labels = blocks.labels
    width = len(labels[0])
    for w in labels:
        if len(w) != width or not ambient.is_admissible(w):
            raise ValueError(f"block label {w} is not an admissible ambient word of length {width}")
    label_index = {w: i for i, w in enumerate(labels)}
    prefixes = {w[:j] for w in labels for j in range(width)}

    def succ(q):
        kind, val = q
        out = []
        if kind == "p":
            for s in range(ambient.k):
                w = val + (s,)
                if len(w) == width:
                    if w in label_index:
                        out.append((s, ("b", label_index[w])))
                elif w in prefixes:
                    out.append((s, ("p", w)))
        else:
            for j in blocks.successors(val):
                out.append((labels[j][-1], ("b", j)))
        return out

    return _build(ambient, ("p", ()), succ)


def union_language(*langs: Language) -> Language:
    """Language of a finite union of targets sharing one ambient matrix."""
    if not langs:
        raise ValueError("need at least one language")
    ambient = langs[0].ambient
    if any(l.ambient != ambient for l in langs):
        raise ValueError("languages must share an ambient matrix")

    def succ(q):
        out = []
        for s in range(ambient.k):
            nxt = tuple(None if qi is None else l.step(qi, s) for l, qi in zip(langs, q))
            if any(v is not None for v in nxt):
                out.append((s, nxt))
        return out

    return _build(ambient, tuple(l.root for l in langs), succ)


def as_language(a: IncidenceMatrix, target=None) -> Language:
    """Normalize a target spec: None (whole SFT), a Language, a labelled
    block matrix, or a list of forbidden words."""
    if target is None:
        return full_language(a)
    if isinstance(target, Language):
        if target.ambient != a:
            raise ValueError("target language has a different ambient matrix")
        return target
    if isinstance(target, IncidenceMatrix):
        return sub_language(a, target)
    return sub_language(a, higher_block_matrix(a, target))
