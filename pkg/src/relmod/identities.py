"""Identities among relations.

An identity sequence is a product of conjugated relators
``prod u_i r_{l_i}^{s_i} u_i^-1`` that freely reduces to 1.  Its image
``sum s_i u_i e_{l_i}`` lies in the kernel of ``ZG^m -> R/[R,R]``, the module
of identities.  Relation-module quotients are cokernels of these images.

Generating sets are produced from the structure of the presentation:

* one relator ``r = t s^e t^-1``: the root identity ``(tst^-1) r (tst^-1)^-1 r^-1``
  generates everything (Lyndon);
* relators on disjoint generator sets: union of the pieces;
* direct products (all cross commutators present): pieces plus one
  identity per (generator of one factor, relator of the other);
* finite groups: a Z-basis of the kernel of the Fox matrix over ZG.

Anything else gets the root identities only and is flagged incomplete.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .enumerator import FiniteQuotient, coset_enumerate
from .intlinalg import left_kernel
from .words import Word, commutator, cyclic_root, product_of


@dataclass(frozen=True)
class IdentitySequence:
    terms: tuple[tuple[Word, int, int], ...]  # (conjugator u, relator index, sign)
    origin: str = ""

    def value(self, relators: Sequence[Word]) -> Word:
        return product_of(u * relators[l] ** s * u.inverse() for u, l, s in self.terms)

    def is_valid(self, relators: Sequence[Word]) -> bool:
        return not self.value(relators)

    def vector(self) -> "IdentityVector":
        return IdentityVector(tuple((s, u, l) for u, l, s in self.terms), self.origin)


@dataclass(frozen=True)
class IdentityVector:
    terms: tuple[tuple[int, Word, int], ...]  # (coefficient, group element as word, relator index)
    origin: str = ""


@dataclass
class IdentityModule:
    """Generators of the identity module, as a left ZG-module.

    ``closed`` means the vectors already span a G-stable Z-lattice, so no
    translates are needed; ``complete`` means they generate the whole module.
    """

    vectors: list[IdentityVector]
    complete: bool
    method: str
    closed: bool = False
    group_order: int | None = None


def root_identity(relators: Sequence[Word], l: int) -> IdentitySequence:
    r = relators[l]
    if not r:
        return IdentitySequence(((Word.identity(), l, 1),), f"trivial relator {l}")
    t, s, _ = cyclic_root(r)
    c = t * s * t.inverse()
    return IdentitySequence(((c, l, 1), (Word.identity(), l, -1)), f"root of relator {l}")


def _commutator_as_conjugate(x: Word, a: Word, relators, cross: dict) -> tuple[Word, int, int]:
    """Express ``[x, a]`` (x a generator letter, a a generator) as ``u c^s u^-1``."""
    g = x.syllables[0][0]
    h = a.syllables[0][0]
    l = cross[frozenset((g, h))]
    target = commutator(x, a)
    c = relators[l]
    for u in (Word.identity(), Word.gen(g), Word.gen(g, -1)):
        for s in (1, -1):
            if u * c ** s * u.inverse() == target:
                return u, l, s
    raise ValueError(f"relator {l} is not a commutator of generators {g} and {h}")


def cross_identity(relators: Sequence[Word], a: int, l: int, cross: dict) -> IdentitySequence:
    """Identity from conjugating relator ``l`` by generator ``a`` that commutes with its letters.

    Uses ``a^-1 y a = y [y, a]`` letter by letter: ``a^-1 r a = Gamma r`` with
    Gamma a product of conjugated commutator relators.
    """
    r = relators[l]
    A = Word.gen(a)
    gamma = []
    prefix = Word.identity()
    for letter in r.letters():
        y = Word.from_letters([letter])
        prefix = prefix * y
        u, lc, s = _commutator_as_conjugate(y, A, relators, cross)
        gamma.append((prefix * u, lc, s))
    terms = [(A.inverse(), l, 1), (Word.identity(), l, -1)]
    terms += [(u, lc, -s) for u, lc, s in reversed(gamma)]
    return IdentitySequence(tuple(terms), f"generator {a} x relator {l}")


def _support(relators, idx) -> set[int]:
    out: set[int] = set()
    for l in idx:
        out |= relators[l].generators_used()
    return out


def _cross_map(relators, A: set[int], B: set[int], T: list[int]):
    """Relator index per cross pair if every pair has exactly one commutator relator."""
    cross = {}
    for l in T:
        r = relators[l]
        used = r.generators_used()
        if len(used) == 2 and len(r) == 4:
            g, h = sorted(used)
            if ((g in A and h in B) or (g in B and h in A)) and r in (
                commutator(Word.gen(g), Word.gen(h)), commutator(Word.gen(h), Word.gen(g))
            ):
                key = frozenset((g, h))
                if key in cross:
                    return None
                cross[key] = l
    if len(cross) != len(A) * len(B):
        return None
    return cross


def _structural(relators, S: set[int], T: list[int]):
    """Identity sequences for the sub-presentation on generators S, relators T."""
    if not T:
        return [], True, "free"
    trivial = [l for l in T if not relators[l]]
    seqs = [root_identity(relators, l) for l in trivial]
    T = [l for l in T if relators[l]]
    if not T:
        return seqs, True, "trivial relators"
    # components of the generator co-occurrence graph
    comps: list[tuple[set[int], list[int]]] = []
    for l in T:
        gens = relators[l].generators_used()
        merged = [c for c in comps if c[0] & gens]
        new = (set(gens), [l])
        for c in merged:
            new[0].update(c[0])
            new[1].extend(c[1])
            comps.remove(c)
        comps.append(new)
    if len(comps) > 1 or trivial:
        ok = True
        methods = []
        for gens, idx in comps:
            s, e, m = _structural(relators, gens, sorted(idx))
            seqs += s
            ok &= e
            methods.append(m)
        return seqs, ok, "free product(" + ", ".join(methods) + ")"
    gens = comps[0][0]
    if len(T) == 1:
        return seqs + [root_identity(relators, T[0])], True, "one relator"
    order = sorted(gens)
    for size in range(1, len(order) // 2 + 1):
        for Acomb in combinations(order, size):
            A = set(Acomb)
            B = gens - A
            cross = _cross_map(relators, A, B, T)
            if cross is None:
                continue
            rest = [l for l in T if l not in cross.values()]
            TA = [l for l in rest if relators[l].generators_used() <= A]
            TB = [l for l in rest if relators[l].generators_used() <= B]
            if len(TA) + len(TB) != len(rest):
                continue
            sa, ea, ma = _structural(relators, A, TA)
            sb, eb, mb = _structural(relators, B, TB)
            out = seqs + sa + sb
            out += [cross_identity(relators, a, l, cross) for a in sorted(A) for l in TB]
            out += [cross_identity(relators, b, l, cross) for b in sorted(B) for l in TA]
            return out, ea and eb, f"direct product({ma}, {mb})"
    return seqs + [root_identity(relators, l) for l in T], False, "unrecognized"


def fox_derivatives(w: Word, G: FiniteQuotient, d: int) -> list[dict[int, int]]:
    """Fox derivatives of ``w`` mapped into ZG, one sparse vector per generator."""
    out: list[dict[int, int]] = [dict() for _ in range(d)]
    cur = 0
    rows = G.table.rows
    for letter in w.letters():
        g = abs(letter) - 1
        if letter > 0:
            out[g][cur] = out[g].get(cur, 0) + 1
            cur = rows[cur][2 * g]
        else:
            cur = rows[cur][2 * g + 1]
            out[g][cur] = out[g].get(cur, 0) - 1
    return out


def finite_identity_module(relators: Sequence[Word], d: int, G: FiniteQuotient) -> list[IdentityVector]:
    """Z-basis of the identity module when G = <X | relators> is the finite group ``G``."""
    m, n = len(relators), G.order
    fox = [fox_derivatives(r, G, d) for r in relators]
    rows = []
    for l in range(m):
        for g in range(n):
            row = [0] * (d * n)
            for j in range(d):
                for u, c in fox[l][j].items():
                    row[j * n + G.mul(g, u)] += c
            rows.append(row)
    basis = left_kernel(rows)
    out = []
    for v in basis:
        terms = tuple((c, G.reps[i % n], i // n) for i, c in enumerate(v) if c)
        out.append(IdentityVector(terms, "finite group kernel"))
    return out


def identity_module(relators: Sequence[Word], d: int, finite_budget: int = 4096,
                    prefer_finite: bool = False) -> IdentityModule:
    """Best available generating set for the identity module of <X | relators>."""
    relators = list(relators)
    seqs, exact, method = _structural(relators, set(range(d)), list(range(len(relators))))
    for s in seqs:
        if not s.is_valid(relators):
            raise AssertionError(f"constructed identity is not trivial in F: {s.origin}")
    if exact and not prefer_finite:
        return IdentityModule([s.vector() for s in seqs], True, method)
    table = coset_enumerate(d, relators, (), max_cosets=finite_budget)
    if table.complete and len(relators) * table.index <= finite_budget:
        G = FiniteQuotient(table.index, table, table.transversal())
        vecs = finite_identity_module(relators, d, G)
        return IdentityModule(vecs, True, "finite group", closed=True, group_order=G.order)
    return IdentityModule([s.vector() for s in seqs], exact, method)
