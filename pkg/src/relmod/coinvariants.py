"""Coinvariants and fixed points of p-groups acting linearly on F_p^m.

The sweep checks that both are nonzero for every p-group action in range,
and that coinvariants of an action match fixed points of its contragredient.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

import numpy as np

MAX_GROUP_ORDER = 1 << 16
SAMPLE_CHUNK = 1000


class NotAPGroupError(ValueError):
    pass


def rank_mod_p(M, p: int) -> int:
    A = np.array(M, dtype=np.int64) % p
    if A.size == 0:
        return 0
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        A = (A - np.outer(col, A[r])) % p
        r += 1
        if r == rows:
            break
    return r


def inverse_mod_p(M, p: int) -> np.ndarray:
    m = len(M)
    A = np.concatenate([np.array(M, dtype=np.int64) % p, np.eye(m, dtype=np.int64)], axis=1)
    for c in range(m):
        piv = next((i for i in range(c, m) if A[i, c]), None)
        if piv is None:
            raise ValueError("matrix is singular mod p")
        A[[c, piv]] = A[[piv, c]]
        A[c] = (A[c] * pow(int(A[c, c]), -1, p)) % p
        col = A[:, c].copy()
        col[c] = 0
        A = (A - np.outer(col, A[c])) % p
    return A[:, m:]


def group_closure(gens: Sequence[np.ndarray], p: int, limit: int = MAX_GROUP_ORDER) -> int:
    """Order of the matrix group generated by ``gens`` (breadth-first closure)."""
    if not gens:
        return 1
    m = gens[0].shape[0]
    weights = np.array([p ** i for i in range(m * m)], dtype=np.int64)
    ident = np.eye(m, dtype=np.int64)
    seen = {int(ident.reshape(-1) @ weights)}
    frontier = ident[None]
    G = np.stack(gens)
    while len(frontier):
        prods = np.einsum("aij,bjk->abik", frontier, G).reshape(-1, m, m) % p
        codes = prods.reshape(len(prods), -1) @ weights
        codes, idx = np.unique(codes, return_index=True)
        new = [i for c, i in zip(codes.tolist(), idx.tolist()) if c not in seen]
        seen.update(int(codes[j]) for j in range(len(codes)))
        if len(seen) > limit:
            raise NotAPGroupError(f"group order exceeds closure bound {limit}")
        frontier = prods[new]
    return len(seen)


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass
class LinearAction:
    p: int
    m: int
    generators: list[np.ndarray]
    order: int = 0

    def __post_init__(self):
        self.generators = [np.array(g, dtype=np.int64) % self.p for g in self.generators]
        for g in self.generators:
            if g.shape != (self.m, self.m):
                raise ValueError("generator has the wrong shape")
            if rank_mod_p(g, self.p) != self.m:
                raise ValueError("generator is not invertible mod p")
        self.order = group_closure(self.generators, self.p)
        if not _is_power_of(self.order, self.p):
            raise NotAPGroupError(f"generated group has order {self.order}, not a power of {self.p}")

    def contragredient(self) -> "LinearAction":
        return LinearAction(self.p, self.m, [inverse_mod_p(g, self.p).T for g in self.generators])


def coinvariant_dim(action: LinearAction) -> int:
    """dim M/(g-1)M; the augmentation submodule is spanned by images of (g_i - 1) over generators."""
    if not action.generators:
        return action.m
    ident = np.eye(action.m, dtype=np.int64)
    span = np.concatenate([g - ident for g in action.generators], axis=1)
    return action.m - rank_mod_p(span, action.p)


def fixed_dim(action: LinearAction) -> int:
    if not action.generators:
        return action.m
    ident = np.eye(action.m, dtype=np.int64)
    stack = np.concatenate([g - ident for g in action.generators], axis=0)
    return action.m - rank_mod_p(stack, action.p)


def unitriangular(m: int, p: int) -> list[np.ndarray]:
    """All upper unitriangular m x m matrices over F_p."""
    slots = [(i, j) for i in range(m) for j in range(i + 1, m)]
    out = []
    for vals in product(range(p), repeat=len(slots)):
        g = np.eye(m, dtype=np.int64)
        for (i, j), v in zip(slots, vals):
            g[i, j] = v
        out.append(g)
    return out


def random_invertible(m: int, p: int, rng: random.Random) -> np.ndarray:
    while True:
        g = np.array([[rng.randrange(p) for _ in range(m)] for _ in range(m)], dtype=np.int64)
        if rank_mod_p(g, p) == m:
            return g


@dataclass
class SweepReport:
    p: int
    dims: list[int]
    mode: str
    instances: int = 0
    rejected: int = 0
    duality_checks: int = 0
    violations: list[dict] = None
    partial: bool = False
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"p": self.p, "dims": self.dims, "mode": self.mode, "instances": self.instances,
                "rejected": self.rejected, "dualityChecks": self.duality_checks,
                "violations": self.violations, "partial": self.partial}


def _check(action: LinearAction, report: SweepReport, max_order: int) -> None:
    if action.order > max_order:
        report.rejected += 1
        return
    report.instances += 1
    cd, fd = coinvariant_dim(action), fixed_dim(action)
    dual = fixed_dim(action.contragredient())
    report.duality_checks += 1
    bad = []
    if cd < 1:
        bad.append("coinvariants vanish")
    if fd < 1:
        bad.append("no fixed points")
    if cd != dual:
        bad.append(f"duality: coinvariant dim {cd} != contragredient fixed dim {dual}")
    if bad:
        report.violations.append({"m": action.m, "order": action.order, "problems": bad,
                                  "generators": [g.tolist() for g in action.generators]})


def _random_chunk(job, deadline):
    p, dims, max_order, samples, max_gens, seed = job
    part = SweepReport(p, dims, "random", violations=[])
    rng = random.Random(seed)
    uts = {m: unitriangular(m, p) for m in dims}
    for _ in range(samples):
        if deadline is not None and time.perf_counter() > deadline:
            part.partial = True
            break
        m = rng.choice(dims)
        P = random_invertible(m, p, rng)
        Pinv = inverse_mod_p(P, p)
        gens = [(P @ rng.choice(uts[m]) @ Pinv) % p for _ in range(rng.randint(1, max_gens))]
        _check(LinearAction(p, m, gens), part, max_order)
    return part


def sweep_lemma(p: int, max_dim: int, max_group_order_exp: int, samples: int | None = None,
                max_gens: int = 3, seed: int = 0, budget_seconds: float | None = None,
                workers: int = 1) -> SweepReport:
    """Check coinvariants and fixed points on p-group actions of dimension <= max_dim.

    Without ``samples`` the sweep is exhaustive over generating sets (up to
    ``max_gens`` elements) of the upper unitriangular group; every p-subgroup
    of GL_m(F_p) is conjugate into that group.  With ``samples`` it draws that
    many random such subgroups, conjugated by random invertible matrices.
    ``budget_seconds`` stops the sweep early and marks the report partial.
    """
    from .presentation import is_prime

    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    if max_dim < 1 or max_group_order_exp < 0:
        raise ValueError("bounds must be positive")
    max_order = p ** max_group_order_exp
    if max_order > MAX_GROUP_ORDER:
        raise ValueError(f"order bound exceeds {MAX_GROUP_ORDER}")
    report = SweepReport(p, list(range(1, max_dim + 1)), "random" if samples else "exhaustive", violations=[])
    t0 = time.perf_counter()

    def out_of_time():
        if budget_seconds is not None and time.perf_counter() - t0 > budget_seconds:
            report.partial = True
            return True
        return False

    if samples is None:
        for m in report.dims:
            elems = [g for g in unitriangular(m, p) if not np.array_equal(g, np.eye(m, dtype=np.int64))]
            _check(LinearAction(p, m, []), report, max_order)
            for size in range(1, max_gens + 1):
                for gens in combinations(elems, size):
                    if out_of_time():
                        break
                    _check(LinearAction(p, m, list(gens)), report, max_order)
    else:
        # fixed chunking keeps the drawn instances independent of the worker count
        chunks = [(p, report.dims, max_order, min(SAMPLE_CHUNK, samples - i), max_gens, seed * 7919 + c)
                  for c, i in enumerate(range(0, samples, SAMPLE_CHUNK))]
        deadline = None if budget_seconds is None else t0 + budget_seconds
        if workers > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_random_chunk, chunks, [deadline] * len(chunks)))
        else:
            parts = [_random_chunk(c, deadline) for c in chunks]
        for part in parts:
            report.instances += part.instances
            report.rejected += part.rejected
            report.duality_checks += part.duality_checks
            report.violations += part.violations
            report.partial |= part.partial
    report.seconds = time.perf_counter() - t0
    return report
