import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pres
from relmod import corpus
from relmod.enumerator import quotient_order
from relmod.identities import identity_module
from relmod.intlinalg import cokernel_invariants, cokernel_log_orders, p_part, word_matrix
from relmod.tower import (InconsistentTowerError, Limits, TowerCell, check_tower_invariants,
                          coinvariant_relations, divisor_profile, enumerated_h_order, fox_kernel_check,
                          gn_quotient, level_logs, profile_from_logs, qr_certify, rationalization_tower,
                          tower_cell, verdict_to_dict)

TORUS = "gens x y; rels [x,y];"


@pytest.mark.parametrize("text,p,n,order", [
    (TORUS, 2, 1, 1), ("gens x y z; rels x^3;", 3, 1, 1),
    (TORUS, 2, 2, 4), ("gens x; rels x^4;", 2, 2, 2), (TORUS, 2, 3, 16), (TORUS, 3, 2, 9),
])
def test_gn_quotient(text, p, n, order):
    assert gn_quotient(pres(text), p, n).order == order


def test_torus_cell():
    c = tower_cell(pres(TORUS), 2, 2, 1)
    assert (c.orderG, c.orderQ, c.logQ, c.orderH) == (4, 16, 4, 64)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_torus_relation_module_is_free_cyclic(n, k):
    # free cyclic module over Z[G_n]: Q = (Z/2^k)^{|G_n|}
    c = tower_cell(pres(TORUS), 2, n, k)
    assert c.logQ == k * c.orderG


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cyclic_level_one(p):
    assert tower_cell(pres(f"gens x; rels x^{p};", primes=(p,)), p, 1, 1).orderQ == p


@pytest.mark.parametrize("n,k", [(1, 1), (2, 3), (3, 2)])
def test_zero_relators(n, k):
    assert tower_cell(pres("gens x y; rels ;"), 2, n, k).orderQ == 1


@pytest.mark.parametrize("name,p,n,k", [
    (name, p, n, k)
    for name in ["klein-four", "cyclic-2-2", "cyclic-3-1", "quaternion", "symmetric-3", "cyclic-2-plus-trivial"]
    for p in corpus.load(name).primes for n in (1, 2) for k in (1, 2)
] + [("elementary-3", 3, 1, 1), ("elementary-3", 3, 1, 2)])
def test_matches_enumeration_oracle(name, p, n, k):
    # for finite G, |F/[R,N]R^{p^k}| = |G| |Q_{n,k}|
    P = corpus.load(name)
    G = quotient_order(P.relators, P.rank)
    h = enumerated_h_order(P, p, n, k, max_cosets=100_000)
    assert h is not None
    assert h == G * tower_cell(P, p, n, k).orderQ


@pytest.mark.parametrize("name", ["klein-four", "cyclic-2-plus-trivial", "cyclic-3-2", "z-plus-z2"])
def test_structural_and_finite_identities_agree(name):
    P = corpus.load(name)
    structural = identity_module(P.relators, P.rank)
    finite = identity_module(P.relators, P.rank, prefer_finite=True)
    assert structural.complete
    m = len(P.relators)
    for p in P.primes:
        for n in (1, 2):
            Gn = gn_quotient(P, p, n)
            assert fox_kernel_check(P, structural, Gn)
            a = cokernel_log_orders(coinvariant_relations(structural, Gn, m), m * Gn.order, p, 3)
            if finite.method == "finite group":
                assert fox_kernel_check(P, finite, Gn)
                b = cokernel_log_orders(coinvariant_relations(finite, Gn, m), m * Gn.order, p, 3)
                assert a == b


@pytest.mark.parametrize("name", corpus.names())
def test_identities_lie_in_fox_kernel(name):
    P = corpus.load(name)
    if not P.relators:
        return
    module = identity_module(P.relators, P.rank)
    assert fox_kernel_check(P, module, gn_quotient(P, P.primes[0], 2))


def test_profile_examples():
    a = profile_from_logs(2, 1, [4, 8, 12])
    assert (a.free_rank_lower_bound, a.torsion_summands, a.undecided_above_exp) == (4, (), 8)
    b = profile_from_logs(3, 1, [3, 5, 7])
    assert (b.free_rank_lower_bound, b.torsion_summands) == (2, (1,))
    c = profile_from_logs(2, 1, [1, 2, 3])
    assert (c.free_rank_lower_bound, c.torsion_summands) == (1, ())


def test_profile_from_cells():
    cells = [TowerCell(2, 1, k, 1, s) for k, s in zip((1, 2, 3), (3, 5, 7))]
    assert divisor_profile(cells).torsion_summands == (1,)


@pytest.mark.parametrize("logs", [[4, 3, 5], [1, 3, 6], [2, 5, 6]])
def test_inconsistent_tower_is_an_error(logs):
    with pytest.raises(InconsistentTowerError):
        profile_from_logs(2, 1, logs)


@given(st.integers(0, 4), st.lists(st.integers(1, 5), max_size=5), st.integers(2, 6))
def test_profile_reconstruction(a, exps, K):
    logs = [a * k + sum(min(e, k) for e in exps) for k in range(1, K + 1)]
    prof = profile_from_logs(2, 1, logs)
    for k in range(1, K + 1):
        assert prof.reconstruct(k) == logs[k - 1]
    assert sorted(prof.torsion_summands) == sorted(e for e in exps if e < K)


def test_witness_on_z_plus_z2():
    v = qr_certify(pres("gens x y; rels y^2, [x,y];", primes=(2,)), N=1, K=3)
    assert v.kind == "TorsionWitness"
    assert v.witness["p"] == 2 and v.witness["n"] == 1 and v.witness["e"] == 1
    assert v.witness["summands"] == [1]


def test_torus_certifies():
    v = qr_certify(pres(TORUS), (2, 3), N=3, K=3)
    assert v.kind == "QuasirationalUpTo"
    assert v.wording() == "quasirational up to (primes=[2, 3], N=3, K=3)"
    assert not v.red_alert


def test_klein_four_witness():
    assert qr_certify(corpus.load("klein-four"), (2,), N=2, K=3).kind == "TorsionWitness"


def test_unrecognized_presentation_is_undecided():
    v = qr_certify(corpus.load("path-four"), (2,), N=2, K=3)
    assert v.kind == "Undecided"
    assert v.witness is None
    assert v.unevaluated and all(u["kind"] == "incomplete-identities" for u in v.unevaluated)
    assert v.wording() == "undecided within (primes=[2], N=2, K=3)"


def test_bounds_validation():
    with pytest.raises(ValueError):
        qr_certify(pres(TORUS), (2,), N=0, K=3)
    with pytest.raises(ValueError):
        qr_certify(pres(TORUS), (2,), N=1, K=1)


def test_presentation_independence():
    a = qr_certify(corpus.load("cyclic-2-1"), (2,), N=3, K=3)
    b = qr_certify(corpus.load("cyclic-2-plus-trivial"), (2,), N=3, K=3)
    assert a.kind == b.kind == "QuasirationalUpTo"


@pytest.mark.parametrize("name", ["z-plus-z2", "klein-four", "elementary-3", "torus", "quaternion"])
def test_cross_checks_pass_on_corpus(name):
    v = qr_certify(corpus.load(name), N=2, K=3)
    assert all(c["status"] == "passed" for c in v.cross_checks)
    assert check_tower_invariants(v.cells) == []


def test_rationalization_tower():
    levels = rationalization_tower(pres(TORUS), 2, N=3, K=3)
    assert [lv.rank_lower_bound for lv in levels] == [lv.orderG for lv in levels] == [1, 4, 16]
    assert [lv.surjects_from_next for lv in levels] == [True, True, None]
    cyc = rationalization_tower(pres("gens x; rels x^2;", primes=(2,)), 2, N=3, K=3)
    assert [lv.rank_lower_bound for lv in cyc] == [1, 1, 1]
    free = rationalization_tower(pres("gens x y; rels ;"), 2, N=2, K=2)
    assert [lv.rank_lower_bound for lv in free] == [0, 0]


def _h_presentation(P, p, n, k):
    from relmod.enumerator import schreier_generators
    from relmod.words import commutator

    ys = schreier_generators(gn_quotient(P, p, n).table)
    rels = [commutator(r, y) for r in P.relators for y in ys] + [r ** (p ** k) for r in P.relators]
    return rels


@pytest.mark.parametrize("name,p,n,k", [("cyclic-2-2", 2, 1, 2), ("cyclic-3-1", 3, 2, 2),
                                        ("klein-four", 2, 1, 1), ("symmetric-3", 3, 1, 1)])
def test_abelianization_consistency(name, p, n, k):
    P = corpus.load(name)
    cell = tower_cell(P, p, n, k)
    rels = _h_presentation(P, p, n, k)
    ab = cokernel_invariants(word_matrix(rels, P.rank), P.rank)
    G = quotient_order(P.relators, P.rank)
    orderH = quotient_order(rels, P.rank)
    assert orderH == G * cell.orderQ
    assert ab.free_rank == 0 and orderH % ab.order() == 0
    if P.rank == 1:  # H is cyclic, hence abelian
        assert ab.order() == orderH
        assert p_part(orderH, p) == sum(p_part(t, p) for t in ab.torsion)


def test_workers_do_not_change_the_report():
    P = corpus.load("z-plus-z2")
    a = verdict_to_dict(qr_certify(P, N=2, K=3))
    b = verdict_to_dict(qr_certify(P, N=2, K=3, limits=Limits(workers=3)))
    assert a == b


def test_level_logs_certification_flag():
    _, logs, cert, vals = level_logs(pres(TORUS), 2, 2, 3)
    assert cert and logs == [4, 8, 12] and vals == []
