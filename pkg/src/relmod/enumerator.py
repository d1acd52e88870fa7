"""Todd-Coxeter coset enumeration (HLT with lookahead).

Columns of a coset table are ``2*i`` for generator ``i`` and ``2*i + 1`` for
its inverse.  Cosets are numbered from 0; coset 0 is the subgroup itself.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .magnus import ResourceError
from .words import Word

DEFAULT_MAX_COSETS = 2_000_000
_BYTES_PER_COSET_COLUMN = 40  # list slot + boxed int, rough upper estimate


def _memory_cap(d: int) -> int | None:
    mb = os.environ.get("RELMOD_MAX_MEMORY_MB")
    if not mb:
        return None
    return int(float(mb) * 2**20 // (_BYTES_PER_COSET_COLUMN * max(2 * d, 1) + 64))


def word_columns(w: Word) -> list[int]:
    cols = []
    for g, e in w.syllables:
        cols.extend([2 * g if e > 0 else 2 * g + 1] * abs(e))
    return cols


@dataclass
class CosetTable:
    ngens: int
    relators: tuple[Word, ...]
    subgroup: tuple[Word, ...]
    rows: list[list[int]]
    complete: bool
    max_cosets: int = DEFAULT_MAX_COSETS

    @property
    def index(self) -> int:
        return len(self.rows)

    def act(self, coset: int, w: Word) -> int:
        c = coset
        for col in word_columns(w):
            c = self.rows[c][col]
        return c

    def transversal(self) -> list[Word]:
        """Breadth-first Schreier transversal; entry ``c`` maps coset 0 to ``c``."""
        if not self.complete:
            raise ValueError("transversal needs a complete table")
        reps: list[Word | None] = [None] * self.index
        reps[0] = Word.identity()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for col in range(2 * self.ngens):
                t = self.rows[c][col]
                if reps[t] is None:
                    g = col // 2
                    reps[t] = reps[c] * Word.gen(g, -1 if col & 1 else 1)
                    queue.append(t)
        return reps

    def verify(self) -> bool:
        """Independent check of the completeness certificate."""
        n = self.index
        for c in range(n):
            row = self.rows[c]
            if len(row) != 2 * self.ngens:
                return False
            for col, t in enumerate(row):
                if not (0 <= t < n) or self.rows[t][col ^ 1] != c:
                    return False
        for r in self.relators:
            cols = word_columns(r)
            for c in range(n):
                t = c
                for col in cols:
                    t = self.rows[t][col]
                if t != c:
                    return False
        for h in self.subgroup:
            if self.act(0, h) != 0:
                return False
        seen = {0}
        stack = [0]
        while stack:
            c = stack.pop()
            for t in self.rows[c]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return len(seen) == n


class _Enumerator:
    def __init__(self, ngens: int, relators, subgroup, max_cosets: int):
        self.ncols = 2 * ngens
        self.rels = [word_columns(r) for r in relators if r]
        self.sub = [word_columns(h) for h in subgroup if h]
        self.max = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]
        self.nlive = 1

    def rep(self, k: int) -> int:
        p = self.parent
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def live(self, k: int) -> bool:
        return self.parent[k] == k

    def define(self, a: int, x: int) -> bool:
        if self.nlive >= self.max:
            return False
        b = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(b)
        self.nlive += 1
        self.table[a][x] = b
        self.table[b][x ^ 1] = a
        return True

    def merge(self, k: int, l: int, q: list[int]) -> None:
        phi, psi = self.rep(k), self.rep(l)
        if phi != psi:
            mu, nu = min(phi, psi), max(phi, psi)
            self.parent[nu] = mu
            self.nlive -= 1
            q.append(nu)

    def coincidence(self, a: int, b: int) -> None:
        t = self.table
        q: list[int] = []
        self.merge(a, b, q)
        i = 0
        while i < len(q):
            g = q[i]
            i += 1
            row = t[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                xi = x ^ 1
                t[d][xi] = -1
                mu, nu = self.rep(g), self.rep(d)
                if t[mu][x] >= 0:
                    self.merge(nu, t[mu][x], q)
                elif t[nu][xi] >= 0:
                    self.merge(mu, t[nu][xi], q)
                else:
                    t[mu][x] = nu
                    t[nu][xi] = mu

    def scan(self, a: int, w: list[int], fill: bool) -> bool:
        """Scan ``w`` at coset ``a``; returns False only if a definition was refused."""
        t = self.table
        f, i, b, j = a, 0, a, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] >= 0:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != a:
                    self.coincidence(f, a)
                return True
            while j >= i and t[b][w[j] ^ 1] >= 0:
                b = t[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                t[f][w[i]] = b
                t[b][w[i] ^ 1] = f
                return True
            if not fill:
                return True
            if not self.define(f, w[i]):
                return False

    def lookahead(self) -> None:
        k = 0
        while k < len(self.table):
            if self.live(k):
                for w in self.rels:
                    self.scan(k, w, fill=False)
                    if not self.live(k):
                        break
            k += 1

    def run(self) -> bool:
        for h in self.sub:
            while not self.scan(0, h, fill=True):
                if not self._relieve():
                    return False
        a = 0
        while a < len(self.table):
            if self.live(a):
                for w in self.rels:
                    while not self.scan(a, w, fill=True):
                        if not self._relieve():
                            return False
                    if not self.live(a):
                        break
                if self.live(a):
                    for x in range(self.ncols):
                        if self.table[a][x] < 0:
                            while not self.define(a, x):
                                if not self._relieve():
                                    return False
            a += 1
        return True

    def _relieve(self) -> bool:
        before = self.nlive
        self.lookahead()
        return self.nlive < before

    def compact(self) -> list[list[int]]:
        """Renumber live cosets breadth-first from coset 0 (deterministic standard form)."""
        t = self.table
        order = [0]
        index = {0: 0}
        k = 0
        while k < len(order):
            c = order[k]
            for x in range(self.ncols):
                d = t[c][x]
                if d >= 0:
                    d = self.rep(d)
                    if d not in index:
                        index[d] = len(order)
                        order.append(d)
            k += 1
        return [[index[self.rep(t[c][x])] if t[c][x] >= 0 else -1 for x in range(self.ncols)] for c in order]


def coset_enumerate(ngens: int, relators: Sequence[Word], subgroup: Sequence[Word] = (),
                    max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the cosets of <subgroup> in <gens | relators>.

    Returns a table whose ``complete`` flag is set only after the independent
    verifier accepts it; otherwise the partial table is returned as incomplete.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    cap = _memory_cap(ngens)
    if cap is not None:
        max_cosets = min(max_cosets, cap)
    relators, subgroup = tuple(relators), tuple(subgroup)
    if ngens == 0:
        return CosetTable(0, relators, subgroup, [[]], True, max_cosets)
    en = _Enumerator(ngens, relators, subgroup, max_cosets)
    ok = en.run()
    rows = en.compact()
    table = CosetTable(ngens, relators, subgroup, rows, False, max_cosets)
    if ok and all(x >= 0 for row in rows for x in row):
        table.complete = table.verify()
        if not table.complete:
            raise AssertionError("coset enumeration produced a table failing verification")
    return table


def schreier_generators(table: CosetTable) -> list[Word]:
    """Schreier generators ``t x rep(t x)^-1`` of the subgroup, identities dropped."""
    if not table.complete:
        raise ValueError("Schreier generators need a complete coset table")
    reps = table.transversal()
    out = []
    for c in range(table.index):
        for g in range(table.ngens):
            s = reps[c] * Word.gen(g) * reps[table.rows[c][2 * g]].inverse()
            if s:
                out.append(s)
    return out


@dataclass
class FiniteQuotient:
    """A finite group F/N given by the regular action on its elements."""

    order: int
    table: CosetTable
    reps: list[Word] = field(repr=False)

    @property
    def permutations(self) -> list[list[int]]:
        return [[row[2 * g] for row in self.table.rows] for g in range(self.table.ngens)]

    def element(self, w: Word, start: int = 0) -> int:
        """Index of ``rep(start) * w``."""
        return self.table.act(start, w)

    def mul(self, a: int, b: int) -> int:
        return self.table.act(a, self.reps[b])

    def inverse(self, a: int) -> int:
        return self.element(self.reps[a].inverse())


def finite_quotient(ngens: int, relators: Sequence[Word], max_cosets: int = DEFAULT_MAX_COSETS) -> FiniteQuotient:
    table = coset_enumerate(ngens, relators, (), max_cosets)
    if not table.complete:
        raise ResourceError(f"coset enumeration did not complete within max_cosets={max_cosets}")
    return FiniteQuotient(table.index, table, table.transversal())


def quotient_order(relators: Sequence[Word], ngens: int, max_cosets: int = DEFAULT_MAX_COSETS) -> int:
    return finite_quotient(ngens, relators, max_cosets).order
