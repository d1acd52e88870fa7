"""Relation-module tower Q_{n,k} = R/[R,RM_n]R^{p^k} and quasirationality verdicts.

With N = RM_n and G_n = F/N finite, R/[R,N] is the module of coinvariants of
the relation module under N/R, which is Z[G_n]^m modulo the image of the
identity module.  Each Q_{n,k} is then read off a Smith form over Z/p^K.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .enumerator import (DEFAULT_MAX_COSETS, FiniteQuotient, coset_enumerate, finite_quotient,
                         schreier_generators)
from .identities import IdentityModule, fox_derivatives, identity_module
from .intlinalg import local_smith_valuations
from .magnus import ResourceError, mn_generators
from .presentation import Presentation
from .words import Word, commutator


# only p-torsion at the filtration prime is examined; q-torsion for q != p is not
TORSION_SCOPE = "p-torsion at the filtration prime only"


class InconsistentTowerError(AssertionError):
    """Cell orders violate a structural invariant; indicates a computation bug."""


@dataclass(frozen=True)
class Limits:
    max_cosets: int = 100_000
    cosets_ceiling: int = DEFAULT_MAX_COSETS
    finite_budget: int = 4096
    workers: int = 1


@dataclass(frozen=True)
class TowerCell:
    p: int
    n: int
    k: int
    orderG: int
    logQ: int
    certified: bool = True

    @property
    def orderQ(self) -> int:
        return self.p ** self.logQ

    @property
    def orderH(self) -> int:
        # |G_n| * |Q_{n,k}|
        return self.orderG * self.orderQ


@dataclass(frozen=True)
class DivisorProfile:
    p: int
    n: int
    free_rank_lower_bound: int
    torsion_summands: tuple[int, ...]  # exponents e, with multiplicity, of Z/p^e summands
    undecided_above_exp: int  # p^K
    logs: tuple[int, ...]

    def reconstruct(self, k: int) -> int:
        return self.free_rank_lower_bound * k + sum(min(e, k) for e in self.torsion_summands)

    @property
    def has_torsion(self) -> bool:
        return bool(self.torsion_summands)


def gn_quotient(pres: Presentation, p: int, n: int, limits: Limits = Limits()) -> FiniteQuotient:
    """G_n = F/RM_n, retrying with a doubled coset budget up to the ceiling."""
    if n < 1:
        raise ValueError("level must be >= 1")
    rels = list(pres.relators) + list(mn_generators(pres.rank, p, n).words)
    budget = limits.max_cosets
    while True:
        try:
            return finite_quotient(pres.rank, rels, budget)
        except ResourceError:
            if budget >= limits.cosets_ceiling:
                raise ResourceError(
                    f"G_{n} at p={p} did not enumerate within max_cosets={limits.cosets_ceiling}") from None
            budget = min(2 * budget, limits.cosets_ceiling)


def coinvariant_relations(module: IdentityModule, Gn: FiniteQuotient, m: int) -> list[list[int]]:
    """Rows spanning the image of the identity module in Z[G_n]^m."""
    q = Gn.order
    rows = []
    starts = [0] if module.closed else range(q)
    for v in module.vectors:
        for h in starts:
            row = [0] * (m * q)
            for c, u, l in v.terms:
                row[l * q + Gn.element(u, h)] += c
            if any(row):
                rows.append(row)
    return rows


@lru_cache(maxsize=64)
def _identity_module_cached(relators: tuple[Word, ...], d: int, finite_budget: int) -> IdentityModule:
    return identity_module(relators, d, finite_budget)


def level_logs(pres: Presentation, p: int, n: int, K: int, limits: Limits = Limits()):
    """``(|G_n|, [s_1..s_K], certified, valuations)`` for one (p, n)."""
    Gn = gn_quotient(pres, p, n, limits)
    m = len(pres.relators)
    if m == 0:
        return Gn.order, [0] * K, True, []
    module = _identity_module_cached(pres.relators, pres.rank, limits.finite_budget)
    rows = coinvariant_relations(module, Gn, m)
    ncols = m * Gn.order
    vals = local_smith_valuations(rows, ncols, p, K) if rows else []
    logs = [sum(min(v, k) for v in vals) + k * (ncols - len(vals)) for k in range(1, K + 1)]
    return Gn.order, logs, module.complete, vals


def tower_cell(pres: Presentation, p: int, n: int, k: int, limits: Limits = Limits()) -> TowerCell:
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    order, logs, cert, _ = level_logs(pres, p, n, k, limits)
    return TowerCell(p, n, k, order, logs[k - 1], cert)


def divisor_profile(cells: list[TowerCell]) -> DivisorProfile:
    """Split the k-sequence of one (p, n) into free-rank bound and torsion exponents."""
    if not cells:
        raise ValueError("no cells")
    cells = sorted(cells, key=lambda c: c.k)
    p, n = cells[0].p, cells[0].n
    if [c.k for c in cells] != list(range(1, len(cells) + 1)):
        raise ValueError("cells must cover k = 1..K")
    if any((c.p, c.n) != (p, n) for c in cells):
        raise ValueError("cells must share p and n")
    return profile_from_logs(p, n, [c.logQ for c in cells])


def profile_from_logs(p: int, n: int, logs) -> DivisorProfile:
    K = len(logs)
    deltas = [logs[0]] + [logs[i] - logs[i - 1] for i in range(1, K)]
    if any(d < 0 for d in deltas) or any(deltas[i] < deltas[i + 1] for i in range(K - 1)):
        raise InconsistentTowerError(f"non-monotone tower at p={p}, n={n}: logs={list(logs)}")
    torsion = []
    for e in range(1, K):
        torsion += [e] * (deltas[e - 1] - deltas[e])
    prof = DivisorProfile(p, n, deltas[-1], tuple(torsion), p ** K, tuple(logs))
    for k in range(1, K + 1):
        if prof.reconstruct(k) != logs[k - 1]:
            raise InconsistentTowerError("divisor profile does not reconstruct the tower")
    return prof


@dataclass
class QRVerdict:
    presentation: str
    kind: str  # "QuasirationalUpTo" | "TorsionWitness" | "Undecided"
    primes: tuple[int, ...]
    N: int
    K: int
    cells: list[TowerCell]
    profiles: list[DivisorProfile]
    witness: dict | None = None
    cross_checks: list[dict] = field(default_factory=list)
    unevaluated: list[dict] = field(default_factory=list)
    identity_method: str = ""
    timings: dict = field(default_factory=dict)

    @property
    def red_alert(self) -> bool:
        return any(c["status"] == "violated" for c in self.cross_checks)

    def wording(self) -> str:
        bounds = f"(primes={list(self.primes)}, N={self.N}, K={self.K})"
        if self.kind == "QuasirationalUpTo":
            return f"quasirational up to {bounds}"
        if self.kind == "TorsionWitness":
            w = self.witness
            return f"not quasirational: Z/{w['p']}^{w['e']} torsion at p={w['p']}, n={w['n']} (x{w['multiplicity']})"
        return f"undecided within {bounds}"


def _level_job(args):
    pres, p, n, K, limits = args
    t0 = time.perf_counter()
    try:
        return (p, n), level_logs(pres, p, n, K, limits), None, time.perf_counter() - t0
    except ResourceError as exc:
        return (p, n), None, str(exc), time.perf_counter() - t0


def compute_levels(pres: Presentation, primes, N: int, K: int, limits: Limits = Limits()):
    jobs = [(pres, p, n, K, limits) for p in primes for n in range(1, N + 1)]
    if limits.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=limits.workers) as pool:
            results = list(pool.map(_level_job, jobs))
    else:
        results = [_level_job(j) for j in jobs]
    # keyed by (p, n): independent of completion order
    return {key: (res, err, dt) for key, res, err, dt in results}


def check_tower_invariants(cells: list[TowerCell]) -> list[str]:
    """Divisibility in k and in n, and delta monotonicity; returns violations."""
    problems = []
    by = {(c.p, c.n, c.k): c for c in cells}
    for (p, n, k), c in by.items():
        up_k = by.get((p, n, k + 1))
        if up_k and up_k.orderQ % c.orderQ:
            problems.append(f"|Q_{n},{k}| does not divide |Q_{n},{k + 1}| at p={p}")
        up_n = by.get((p, n + 1, k))
        if up_n and up_n.orderQ % c.orderQ:
            problems.append(f"|Q_{n},{k}| does not divide |Q_{n + 1},{k}| at p={p}")
        if c.orderH % c.orderG:
            problems.append(f"|G_n| does not divide |H| at p={p}, n={n}, k={k}")
    groups: dict = {}
    for c in cells:
        groups.setdefault((c.p, c.n), []).append(c)
    for (p, n), cs in groups.items():
        try:
            divisor_profile(cs)
        except (InconsistentTowerError, ValueError) as exc:
            problems.append(str(exc))
    return problems


def qr_certify(pres: Presentation, primes=None, N: int = 3, K: int = 3,
               limits: Limits = Limits()) -> QRVerdict:
    """Bounded quasirationality check over primes x levels 1..N x exponents 1..K."""
    if N < 1 or K < 2:
        raise ValueError("need N >= 1 and K >= 2")
    primes = tuple(primes or pres.primes)
    t0 = time.perf_counter()
    levels = compute_levels(pres, primes, N, K, limits)
    cells, profiles, unevaluated = [], [], []
    timings = {}
    for (p, n) in sorted(levels):
        res, err, dt = levels[(p, n)]
        timings[f"p={p},n={n}"] = round(dt, 4)
        if res is None:
            unevaluated.append({"p": p, "n": n, "kind": "resource", "reason": err})
            continue
        order, logs, cert, _ = res
        cs = [TowerCell(p, n, k, order, logs[k - 1], cert) for k in range(1, K + 1)]
        cells += cs
        profiles.append(profile_from_logs(p, n, logs))
        if not cert:
            unevaluated.append({"p": p, "n": n, "kind": "incomplete-identities",
                                "reason": "identity module not known to be complete"})
    cert_keys = {(c.p, c.n) for c in cells if c.certified}
    witness = None
    for prof in profiles:
        if prof.has_torsion and (prof.p, prof.n) in cert_keys:
            e = prof.torsion_summands[0]
            witness = {"p": prof.p, "n": prof.n, "e": e,
                       "multiplicity": prof.torsion_summands.count(e),
                       "summands": list(prof.torsion_summands)}
            break
    if witness:
        kind = "TorsionWitness"
    elif unevaluated:
        kind = "Undecided"
    else:
        kind = "QuasirationalUpTo"

    checks = []
    problems = check_tower_invariants(cells)
    checks.append({"name": "tower-invariants", "status": "violated" if problems else "passed",
                   "detail": problems})
    viol = []
    for p in primes:
        tors_n = [pr.n for pr in profiles if pr.p == p and pr.has_torsion]
        lvl1 = [pr for pr in profiles if pr.p == p and pr.n == 1]
        if tors_n and lvl1 and not lvl1[0].has_torsion:
            viol.append(f"p={p}: torsion at n={tors_n} but not at n=1")
    checks.append({"name": "level-one-torsion", "status": "violated" if viol else "passed", "detail": viol})
    module = _identity_module_cached(pres.relators, pres.rank, limits.finite_budget) if pres.relators else None
    timings["total"] = round(time.perf_counter() - t0, 4)
    return QRVerdict(pres.name, kind, primes, N, K, cells, profiles, witness, checks, unevaluated,
                     module.method if module else "no relators", timings)


@dataclass
class RationalizationLevel:
    n: int
    orderG: int
    rank_lower_bound: int
    logs: tuple[int, ...]
    surjects_from_next: bool | None  # |Q_{n,k}| divides |Q_{n+1,k}| for all k


def rationalization_tower(pres: Presentation, p: int, N: int = 3, K: int = 3,
                          limits: Limits = Limits()) -> list[RationalizationLevel]:
    out = []
    prev = None
    data = []
    for n in range(1, N + 1):
        order, logs, cert, _ = level_logs(pres, p, n, K, limits)
        prof = profile_from_logs(p, n, logs)
        data.append((n, order, prof.free_rank_lower_bound, tuple(logs)))
    for i, (n, order, a, logs) in enumerate(data):
        nxt = data[i + 1][3] if i + 1 < len(data) else None
        ok = None if nxt is None else all(b >= c for b, c in zip(nxt, logs))
        out.append(RationalizationLevel(n, order, a, logs, ok))
    return out


def enumerated_h_order(pres: Presentation, p: int, n: int, k: int, max_cosets: int = 200_000) -> int | None:
    """|F/[R,N]R^{p^k}| by coset enumeration; finite only when G itself is finite.

    Relators are ``[r_i, y_j]`` over Schreier generators ``y_j`` of N and
    ``r_i^{p^k}``.  Returns None when enumeration does not complete.
    """
    Gn = gn_quotient(pres, p, n)
    ys = schreier_generators(Gn.table)
    rels = [commutator(r, y) for r in pres.relators for y in ys]
    rels += [r ** (p ** k) for r in pres.relators]
    table = coset_enumerate(pres.rank, rels, (), max_cosets)
    return table.index if table.complete else None


def fox_kernel_check(pres: Presentation, module: IdentityModule, Gn: FiniteQuotient) -> bool:
    """Images of identity vectors in Z[G_n]^m die under the Fox map to Z[G_n]^d."""
    d, q = pres.rank, Gn.order
    fox = [fox_derivatives(r, Gn, d) for r in pres.relators]
    for v in module.vectors:
        acc = [0] * (d * q)
        for c, u, l in v.terms:
            g = Gn.element(u)
            for j in range(d):
                for w, a in fox[l][j].items():
                    acc[j * q + Gn.mul(g, w)] += c * a
        if any(acc):
            return False
    return True


def verdict_to_dict(v: QRVerdict, timings: bool = False) -> dict:
    out = {
        "presentation": v.presentation,
        "verdict": {"kind": v.kind, "wording": v.wording(), "witness": v.witness},
        "bounds": {"primes": list(v.primes), "N": v.N, "K": v.K},
        "cells": [
            {"p": c.p, "n": c.n, "k": c.k, "orderH": c.orderH, "orderG": c.orderG,
             "orderQ": c.orderQ, "logQ": c.logQ, "certified": c.certified}
            for c in sorted(v.cells, key=lambda c: (c.p, c.n, c.k))
        ],
        "profiles": [
            {"p": pr.p, "n": pr.n, "freeRankLowerBound": pr.free_rank_lower_bound,
             "torsionSummands": list(pr.torsion_summands), "undecidedAboveExp": pr.undecided_above_exp}
            for pr in sorted(v.profiles, key=lambda pr: (pr.p, pr.n))
        ],
        "crossChecks": v.cross_checks,
        "unevaluated": v.unevaluated,
        "identityMethod": v.identity_method,
        "torsionScope": TORSION_SCOPE,
    }
    if timings:
        out["timings"] = v.timings
    return out
