"""Exact integer linear algebra: Smith normal form and abelian invariants."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .words import Word


@dataclass(frozen=True)
class SmithForm:
    divisors: tuple[int, ...]  # nonzero diagonal entries, d_1 | d_2 | ...
    rank: int
    left: list[list[int]] | None = None  # U with U A V = D
    right: list[list[int]] | None = None

    @property
    def nrows(self) -> int:
        return len(self.left) if self.left is not None else -1


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Sequence[Sequence[int]], transforms: bool = False) -> SmithForm:
    """Smith normal form over the integers.

    Pivots are chosen by least absolute value.  With ``transforms`` the
    unimodular ``U`` and ``V`` with ``U A V = diag(divisors, 0...)`` are
    returned as well.
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        if c:
            rs, rd = A[src], A[dst]
            for k in range(n):
                if rs[k]:
                    rd[k] += c * rs[k]
            if U is not None:
                us, ud = U[src], U[dst]
                for k in range(m):
                    if us[k]:
                        ud[k] += c * us[k]

    def add_col(dst, src, c):
        if c:
            for row in A:
                if row[src]:
                    row[dst] += c * row[src]
            if V is not None:
                for row in V:
                    if row[src]:
                        row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    add_row(i, t, -q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    add_col(j, t, -q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    divisors = tuple(A[i][i] for i in range(t))
    return SmithForm(divisors, t, U, V)


def left_kernel(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer basis of {v : v A = 0}."""
    m = len(matrix)
    if m == 0:
        return []
    if not matrix[0]:
        return _identity(m)
    sf = smith_normal_form(matrix, transforms=True)
    return [sf.left[i] for i in range(sf.rank, m)]


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]  # d_1 | d_2 | ..., each > 1

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion invariants must form a divisibility chain")
        if any(t <= 1 for t in self.torsion):
            raise ValueError("torsion invariants must exceed 1")

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out


def cokernel_invariants(relations: Sequence[Sequence[int]], ncols: int) -> AbelianInvariants:
    """Invariants of Z^ncols modulo the row span of ``relations``."""
    if not relations:
        return AbelianInvariants(ncols, ())
    sf = smith_normal_form(relations)
    return AbelianInvariants(ncols - sf.rank, tuple(d for d in sf.divisors if d != 1))


def abelian_invariants(pres) -> AbelianInvariants:
    """H_1 of the presented group from the relator exponent-sum matrix."""
    d = pres.rank
    return cokernel_invariants([r.exponent_sums(d) for r in pres.relators], d)


def p_part(order: int, p: int) -> int:
    if order < 1:
        raise ValueError("order must be positive")
    e = 0
    while order % p == 0:
        order //= p
        e += 1
    return e


def local_smith_valuations(rows, ncols: int, p: int, e: int) -> list[int]:
    """Elementary-divisor valuations of a relation matrix over Z/p^e.

    Returns ``v_i < e`` for each pivot whose divisor is nonzero mod ``p^e``;
    the cokernel over Z/p^e is the sum of Z/p^{v_i} and (ncols - len) copies
    of Z/p^e.
    """
    mod = p ** e
    if not len(rows) or ncols == 0:
        return []
    A = np.array([[int(x) % mod for x in row] for row in rows], dtype=object)
    if mod < (1 << 31):
        A = A.astype(np.int64)
    nr, nc = A.shape
    vals: list[int] = []
    for t in range(min(nr, nc)):
        sub = A[t:, t:]
        pivot = None
        for v in range(e):
            hit = np.argwhere(sub % p ** (v + 1) != 0)
            if hit.size:
                pivot = (v, hit[0][0] + t, hit[0][1] + t)
                break
        if pivot is None:
            break
        v, i, j = pivot
        A[[t, i], t:] = A[[i, t], t:]
        A[t:, [t, j]] = A[t:, [j, t]]
        unit = int(A[t, t]) // p ** v
        A[t, t:] = (A[t, t:] * pow(unit, -1, mod)) % mod
        factors = A[t + 1:, t] // p ** v
        A[t + 1:, t:] = (A[t + 1:, t:] - np.outer(factors, A[t, t:])) % mod
        A[t, t + 1:] = 0
        vals.append(v)
    return sorted(vals)


def cokernel_log_orders(rows, ncols: int, p: int, K: int) -> list[int]:
    """``log_p |coker mod p^k|`` for k = 1..K."""
    vals = local_smith_valuations(rows, ncols, p, K)
    free = ncols - len(vals)
    return [sum(min(v, k) for v in vals) + k * free for k in range(1, K + 1)]


def word_matrix(words: Sequence[Word], d: int) -> list[list[int]]:
    return [w.exponent_sums(d) for w in words]
