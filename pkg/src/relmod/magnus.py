"""Truncated mod-p free associative algebra and the Magnus embedding.

Monomials are tuples of generator indices; a :class:`TruncPoly` keeps only
monomials of length below its truncation degree and only nonzero residues.
"""
from __future__ import annotations

from dataclasses import dataclass

from .words import Word, left_normed_commutators

DEFAULT_MAX_ELEMENTS = 1 << 20


class ResourceError(RuntimeError):
    """A configured size bound was hit; the message names the bound."""


@dataclass(frozen=True)
class TruncPoly:
    p: int
    L: int
    coeffs: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_dict(cls, p: int, L: int, d: dict) -> "TruncPoly":
        items = sorted((m, c % p) for m, c in d.items() if len(m) < L and c % p)
        return cls(p, L, tuple(items))

    @classmethod
    def one(cls, p: int, L: int) -> "TruncPoly":
        return cls.from_dict(p, L, {(): 1})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._compatible(other)
        d = self.as_dict()
        for m, c in other.coeffs:
            d[m] = d.get(m, 0) + c
        return TruncPoly.from_dict(self.p, self.L, d)

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        return self + other.scale(-1)

    def scale(self, a: int) -> "TruncPoly":
        return TruncPoly.from_dict(self.p, self.L, {m: a * c for m, c in self.coeffs})

    def __mul__(self, other: "TruncPoly") -> "TruncPoly":
        self._compatible(other)
        return TruncPoly.from_dict(self.p, self.L, _mul(self.as_dict(), other.as_dict(), self.p, self.L))

    def _compatible(self, other: "TruncPoly"):
        if (self.p, self.L) != (other.p, other.L):
            raise ValueError("TruncPoly operands differ in prime or truncation")

    def is_one(self) -> bool:
        return self.coeffs == (((), 1),)

    def low_degree(self) -> int | None:
        """Least degree of a nonzero term of ``self - 1``; None if ``self == 1``."""
        degs = [len(m) for m, c in self.coeffs if m or c != 1]
        return min(degs) if degs else None

    def homogeneous(self, n: int) -> dict:
        return {m: c for m, c in self.coeffs if len(m) == n}

    def format(self, names=None) -> str:
        if not self.coeffs:
            return "0"
        names = names or ["X", "Y", "Z", "W"]
        terms = []
        for m, c in self.coeffs:
            c = c if c <= self.p // 2 else c - self.p
            if not m:
                terms.append(str(c))
                continue
            mono = "".join(names[i] for i in m)
            terms.append({1: "", -1: "-"}.get(c, str(c)) + mono)
        return " + ".join(terms).replace("+ -", "- ")


def _mul(a: dict, b: dict, p: int, L: int) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        room = L - len(ma)
        for mb, cb in b.items():
            if len(mb) < room:
                m = ma + mb
                out[m] = (out.get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def _gen_power(i: int, e: int, p: int, L: int) -> dict:
    # (1 + X_i)^e with the generalized binomial series, exact for negative e since X_i is nilpotent
    out = {}
    for j in range(L):
        num = 1
        for t in range(j):
            num *= e - t
        c = (num // _fact(j)) % p
        if c:
            out[(i,) * j] = c
    return out


def _fact(j: int) -> int:
    f = 1
    for t in range(2, j + 1):
        f *= t
    return f


def eval_magnus(w: Word, p: int, L: int) -> TruncPoly:
    """Image of ``w`` under ``x_i -> 1 + X_i`` in the algebra truncated at degree ``L``."""
    if L < 1:
        raise ValueError("truncation degree must be >= 1")
    acc = {(): 1}
    for g, e in w.syllables:
        acc = _mul(acc, _gen_power(g, e, p, L), p, L)
    return TruncPoly.from_dict(p, L, acc)


@dataclass(frozen=True)
class AtLeast:
    """Degree known only to be at least ``bound`` (image is 1 at that truncation)."""

    bound: int

    def __int__(self):
        return self.bound


def zassenhaus_degree(w: Word, p: int, L: int) -> int | AtLeast:
    """Largest n with ``w`` in M_n, as far as truncation ``L`` can see."""
    deg = eval_magnus(w, p, L).low_degree()
    return AtLeast(L) if deg is None else deg


def exact_zassenhaus_degree(w: Word, p: int, L: int | None = None, max_L: int = 64) -> int:
    """Zassenhaus degree of a nontrivial word, doubling the truncation as needed."""
    return degree_with_truncation(w, p, L, max_L)[0]


def degree_with_truncation(w: Word, p: int, L: int | None = None, max_L: int = 64) -> tuple[int, int]:
    """``(degree, truncation that resolved it)``."""
    if not w:
        raise ValueError("the identity lies in every filtration term")
    L = L or 4
    while True:
        deg = zassenhaus_degree(w, p, L)
        if not isinstance(deg, AtLeast):
            return deg, L
        if L >= max_L:
            raise ResourceError(f"degree exceeds truncation cap max_L={max_L}")
        L = min(2 * L, max_L)


@dataclass(frozen=True)
class FiltrationLevel:
    level: int
    p: int
    words: tuple[Word, ...]

    def check(self) -> bool:
        """Every generating word lies in M_n according to the Magnus image."""
        L = self.level + 1
        for w in self.words:
            deg = zassenhaus_degree(w, self.p, L)
            if not isinstance(deg, AtLeast) and deg < self.level:
                return False
        return True


def mn_generators(d: int, p: int, n: int) -> FiltrationLevel:
    """Finite normal generating set for M_n of the free group of rank ``d``.

    Uses ``c^(p^j)`` for every left-normed commutator ``c`` of weight ``i <= n``
    with ``j`` minimal such that ``i * p^j >= n``.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    if n == 1:
        return FiltrationLevel(1, p, tuple(Word.gen(i) for i in range(d)))
    seen: dict[Word, None] = {}
    for i in range(1, n + 1):
        j, q = 0, 1
        while i * q < n:
            j, q = j + 1, q * p
        for c in left_normed_commutators(d, i):
            w = c ** q
            if w:
                seen.setdefault(w, None)
    return FiltrationLevel(n, p, tuple(seen))


def free_quotient_order_by_magnus(d: int, p: int, n: int, L: int | None = None,
                                  max_elements: int = DEFAULT_MAX_ELEMENTS) -> int:
    """|F/M_n| as the size of the unit subgroup generated by the images of the generators.

    Elements are truncated to degree ``n``, where the kernel of the
    representation is exactly M_n.
    """
    L = n if L is None else L
    if L < n:
        raise ValueError("truncation must be at least the level")
    one = ((), 1)
    gens = [tuple(sorted({(): 1, (i,): 1}.items())) for i in range(d)] if n > 1 else []
    start = (one,)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for el in frontier:
            a = dict(el)
            for g in gens:
                prod = tuple(sorted(_mul(a, dict(g), p, n).items()))
                if prod not in seen:
                    seen.add(prod)
                    if len(seen) > max_elements:
                        raise ResourceError(f"closure exceeded max_elements={max_elements}")
                    nxt.append(prod)
        frontier = nxt
    return len(seen)
