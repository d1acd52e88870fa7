from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import words
from relmod.enumerator import quotient_order
from relmod.magnus import (AtLeast, ResourceError, TruncPoly, eval_magnus, exact_zassenhaus_degree,
                           free_quotient_order_by_magnus, mn_generators, zassenhaus_degree)
from relmod.words import Word, commutator


# independent oracle: letter-by-letter products with inverses as explicit geometric series
def _naive_mul(a, b, p, L):
    out = {}
    for (ma, ca), (mb, cb) in product(a.items(), b.items()):
        if len(ma) + len(mb) < L:
            out[ma + mb] = (out.get(ma + mb, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def naive_magnus(w: Word, p: int, L: int) -> dict:
    acc = {(): 1}
    for letter in w.letters():
        i = abs(letter) - 1
        if letter > 0:
            f = {(): 1, (i,): 1}
        else:
            f = {(i,) * j: (-1) ** j % p for j in range(L)}
        acc = _naive_mul(acc, f, p, L)
    return {m: c for m, c in acc.items() if c and len(m) < L}


def test_identity_maps_to_one():
    assert eval_magnus(Word.identity(), 2, 4).is_one()


def test_inverse_geometric_series():
    assert eval_magnus(Word.gen(0, -1), 2, 3).as_dict() == {(): 1, (0,): 1, (0, 0): 1}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_commutator_image(p):
    img = eval_magnus(commutator(Word.gen(0), Word.gen(1)), p, 3)
    assert img.as_dict() == {(): 1, (0, 1): 1, (1, 0): p - 1}
    assert img.format() in ("1 + XY - YX", "1 + XY + YX")


@pytest.mark.parametrize("w,p,deg", [
    (Word.gen(0), 2, 1), (Word.gen(0), 3, 1),
    (Word.gen(0, 2), 2, 2), (Word.gen(0, 3), 3, 3), (Word.gen(0, 4), 2, 4),
    (commutator(Word.gen(0), Word.gen(1)), 2, 2),
    (commutator(Word.gen(0), Word.gen(1)) ** 2, 2, 4),
    (commutator(Word.gen(0), Word.gen(1), Word.gen(1)), 3, 3),
])
def test_degree_examples(w, p, deg):
    assert exact_zassenhaus_degree(w, p) == deg


def test_atleast_when_truncation_too_small():
    assert zassenhaus_degree(Word.gen(0, 8), 2, 4) == AtLeast(4)
    with pytest.raises(ResourceError):
        exact_zassenhaus_degree(Word.gen(0, 64), 2, max_L=8)


@pytest.mark.parametrize("p", [2, 3])
@given(w=words(2, 5))
def test_matches_naive_oracle(p, w):
    assert eval_magnus(w, p, 5).as_dict() == naive_magnus(w, p, 5)


@given(words(2, 4), words(2, 4))
def test_homomorphism(u, v):
    assert eval_magnus(u * v, 3, 5) == eval_magnus(u, 3, 5) * eval_magnus(v, 3, 5)


@pytest.mark.parametrize("p", [2, 3])
@given(u=words(2, 4), v=words(2, 4))
def test_filtration_multiplicativity(p, u, v):
    L = 7
    du, dv = zassenhaus_degree(u, p, L), zassenhaus_degree(v, p, L)
    if isinstance(du, AtLeast) or isinstance(dv, AtLeast):
        return
    duv = zassenhaus_degree(u * v, p, L)
    assert int(duv) >= min(du, dv)
    dc = zassenhaus_degree(commutator(u, v), p, L)
    assert isinstance(dc, AtLeast) or dc >= min(du + dv, L)


@pytest.mark.parametrize("p", [2, 3])
@given(w=words(2, 4))
def test_restricted_power(p, w):
    L = 8
    d = zassenhaus_degree(w, p, L)
    if isinstance(d, AtLeast):
        return
    dp = zassenhaus_degree(w ** p, p, L)
    assert isinstance(dp, AtLeast) or dp >= p * d


def test_mn_generator_examples():
    x, y = Word.gen(0), Word.gen(1)
    assert set(mn_generators(2, 2, 1).words) == {x, y}
    assert set(mn_generators(2, 2, 2).words) == {x ** 2, y ** 2, commutator(x, y), commutator(y, x)}
    g3 = set(mn_generators(2, 2, 3).words)
    assert {x ** 4, y ** 4, commutator(x, y) ** 2, commutator(y, x) ** 2} <= g3
    assert commutator(x, y, x) in g3


@pytest.mark.parametrize("d,p,n", [(1, 2, 4), (2, 2, 3), (2, 2, 4), (2, 3, 3), (3, 2, 3)])
def test_generating_set_soundness(d, p, n):
    lvl = mn_generators(d, p, n)
    assert lvl.check()
    assert all(exact_zassenhaus_degree(w, p) >= n for w in lvl.words)


@pytest.mark.parametrize("d,n", [(1, 3), (2, 3), (3, 2)])
def test_graded_dimension(d, n):
    # every degree-n monomial appears in the product of (1 + X_i) over all degree-n index tuples
    mons = set()
    for idx in product(range(d), repeat=n):
        w = Word.identity()
        for i in idx:
            w = w * Word.gen(i)
        mons |= set(TruncPoly.homogeneous(eval_magnus(w, 2, n + 1), n))
    assert len(mons) == d ** n


@pytest.mark.parametrize("d,p,n,order", [
    (2, 2, 1, 1), (2, 2, 2, 4), (2, 2, 3, 32), (2, 2, 4, 128), (1, 2, 3, 4), (2, 3, 2, 9), (2, 3, 3, 27),
])
def test_free_quotient_orders(d, p, n, order):
    assert free_quotient_order_by_magnus(d, p, n) == order


@pytest.mark.parametrize("d,p,n", [(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 3, 2), (2, 3, 3), (1, 3, 4)])
def test_cross_engine_agreement(d, p, n):
    assert quotient_order(list(mn_generators(d, p, n).words), d) == free_quotient_order_by_magnus(d, p, n)


def test_closure_bound_is_reported():
    with pytest.raises(ResourceError, match="max_elements"):
        free_quotient_order_by_magnus(2, 2, 4, max_elements=10)
