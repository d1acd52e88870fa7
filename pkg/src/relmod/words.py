"""Free group words.

A word is stored in syllable form: a tuple of ``(generator index, exponent)``
pairs with adjacent generators distinct and exponents nonzero.  The empty
tuple is the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class Word:
    syllables: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        s = self.syllables
        for i, (g, e) in enumerate(s):
            if e == 0 or g < 0:
                raise ValueError(f"bad syllable {(g, e)}")
            if i and s[i - 1][0] == g:
                raise ValueError("word is not freely reduced")

    @classmethod
    def identity(cls) -> "Word":
        return _IDENTITY

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "Word":
        return cls(((i, e),)) if e else _IDENTITY

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "Word":
        """Build from signed letters: ``+(i+1)`` is generator i, ``-(i+1)`` its inverse."""
        return reduce_letters(letters)

    def letters(self) -> list[int]:
        out = []
        for g, e in self.syllables:
            out.extend([g + 1 if e > 0 else -(g + 1)] * abs(e))
        return out

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = _IDENTITY
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self, f: "Word") -> "Word":
        """``f^-1 w f``."""
        return f.inverse() * self * f

    def generators_used(self) -> set[int]:
        return {g for g, _ in self.syllables}

    def exponent_sums(self, d: int) -> list[int]:
        v = [0] * d
        for g, e in self.syllables:
            v[g] += e
        return v

    def format(self, names: Sequence[str]) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for g, e in self.syllables:
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({self.format([f'x{i}' for i in range(self.max_gen() + 1)])})"

    def max_gen(self) -> int:
        return max((g for g, _ in self.syllables), default=-1)


_IDENTITY = Word(())


def _push(stack: list[list[int]], g: int, e: int) -> None:
    if e == 0:
        return
    if stack and stack[-1][0] == g:
        stack[-1][1] += e
        if stack[-1][1] == 0:
            stack.pop()
    else:
        stack.append([g, e])


def reduce_syllables(raw: Iterable[tuple[int, int]]) -> Word:
    stack: list[list[int]] = []
    for g, e in raw:
        _push(stack, g, e)
    return Word(tuple((g, e) for g, e in stack))


def reduce_letters(letters: Iterable[int]) -> Word:
    return reduce_syllables((abs(a) - 1, 1 if a > 0 else -1) for a in letters)


def reduce(raw: Sequence, names: Sequence[str] | None = None) -> Word:
    """Freely reduce a sequence of signed letters.

    Items may be ``(generator, exponent)`` pairs or, when ``names`` is given,
    strings such as ``"x"`` and ``"x^-1"``.  Unknown names raise
    :class:`~relmod.dsl.ParseError`.
    """
    pairs = []
    for item in raw:
        if isinstance(item, str):
            from .dsl import ParseError

            if names is None:
                raise ParseError(f"cannot resolve letter {item!r} without generator names")
            name, _, exp = item.partition("^")
            if name not in names:
                raise ParseError(f"undeclared generator {name!r}")
            pairs.append((list(names).index(name), int(exp) if exp else 1))
        else:
            g, e = item
            pairs.append((int(g), int(e)))
    return reduce_syllables(pairs)


def multiply(u: Word, v: Word) -> Word:
    if not u.syllables:
        return v
    if not v.syllables:
        return u
    stack = [list(s) for s in u.syllables]
    vs = v.syllables
    i = 0
    # only the junction can cancel
    while i < len(vs) and stack and stack[-1][0] == vs[i][0]:
        stack[-1][1] += vs[i][1]
        if stack[-1][1] == 0:
            stack.pop()
            i += 1
        else:
            i += 1
            break
    return Word(tuple(map(tuple, stack)) + vs[i:])


def product_of(words: Iterable[Word]) -> Word:
    out = _IDENTITY
    for w in words:
        out = out * w
    return out


def commutator(u: Word, *rest: Word) -> Word:
    """Left-normed commutator; ``[u, v] = u^-1 v^-1 u v``."""
    c = u
    for v in rest:
        c = c.inverse() * v.inverse() * c * v
    return c


def left_normed_commutators(d: int, w: int) -> list[Word]:
    """All nontrivial left-normed commutators of weight ``w`` in ``d`` generators.

    Repeats of letters are allowed; trivial and duplicate results are dropped,
    first occurrence order preserved.
    """
    if w < 1:
        raise ValueError("weight must be >= 1")
    gens = [Word.gen(i) for i in range(d)]
    if w == 1:
        return gens
    seen: dict[Word, None] = {}
    for idx in product(range(d), repeat=w):
        c = commutator(*(gens[i] for i in idx))
        if c:
            seen.setdefault(c, None)
    return list(seen)


def cyclic_root(w: Word) -> tuple[Word, Word, int]:
    """Write ``w = t s^e t^-1`` with ``s`` cyclically reduced and not a proper power.

    Returns ``(t, s, e)``; for the identity returns ``(1, 1, 0)``.
    """
    letters = w.letters()
    if not letters:
        return _IDENTITY, _IDENTITY, 0
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    t = Word.from_letters(letters[:i])
    core = letters[i : j + 1]
    n = len(core)
    for period in range(1, n + 1):
        if n % period == 0 and core[:period] * (n // period) == core:
            return t, Word.from_letters(core[:period]), n // period
    raise AssertionError("unreachable")
