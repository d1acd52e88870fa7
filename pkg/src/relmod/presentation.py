from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .words import Word

MAX_GENERATORS = 4
MAX_RELATORS = 6
DISCRETE_DEFAULT_PRIMES = (2, 3)


class PresentationError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def check_primes(primes: Sequence[int]) -> tuple[int, ...]:
    primes = tuple(int(p) for p in primes)
    if not primes:
        raise PresentationError("prime list is empty")
    if len(set(primes)) != len(primes):
        raise PresentationError(f"duplicate primes in {list(primes)}")
    for p in primes:
        if not is_prime(p):
            raise PresentationError(f"{p} is not a prime")
    return primes


@dataclass(frozen=True)
class Presentation:
    """A finite presentation <X; R> together with the primes to test.

    In ``pro-p`` mode exactly one prime is allowed.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    primes: tuple[int, ...] = DISCRETE_DEFAULT_PRIMES
    mode: str = "discrete"
    name: str = ""
    limits: tuple[int, int] = field(default=(MAX_GENERATORS, MAX_RELATORS), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        object.__setattr__(self, "primes", check_primes(self.primes))
        if self.mode not in ("discrete", "pro-p"):
            raise PresentationError(f"unknown mode {self.mode!r}")
        if self.mode == "pro-p" and len(self.primes) != 1:
            raise PresentationError("pro-p mode takes a single prime")
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        max_d, max_m = self.limits
        if len(self.generators) > max_d:
            raise PresentationError(f"{len(self.generators)} generators exceeds the limit of {max_d}")
        if len(self.relators) > max_m:
            raise PresentationError(f"{len(self.relators)} relators exceeds the limit of {max_m}")
        d = len(self.generators)
        for r in self.relators:
            if not isinstance(r, Word):
                raise PresentationError(f"relator {r!r} is not a Word")
            if r.max_gen() >= d:
                raise PresentationError("relator references an undeclared generator")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def format_word(self, w: Word) -> str:
        return w.format(self.generators)

    def with_relators(self, relators: Sequence[Word], name: str | None = None) -> "Presentation":
        return replace(self, relators=tuple(relators), name=self.name if name is None else name)

    def with_primes(self, primes: Sequence[int], mode: str | None = None) -> "Presentation":
        return replace(self, primes=tuple(primes), mode=mode or self.mode)

    def subpresentations(self) -> list["Presentation"]:
        """Presentations with exactly one relator deleted."""
        out = []
        for i in range(len(self.relators)):
            rels = self.relators[:i] + self.relators[i + 1 :]
            out.append(self.with_relators(rels, name=f"{self.name}-minus-{i}"))
        return out
