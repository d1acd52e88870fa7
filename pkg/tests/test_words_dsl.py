import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import words
from relmod.dsl import ParseError, format_presentation, parse_presentation
from relmod.presentation import PresentationError
from relmod.words import Word, commutator, cyclic_root, reduce, reduce_letters


def test_free_reduction_of_named_letters():
    assert reduce(["x", "x^-1", "y"], names=["x", "y"]) == Word.gen(1)


def test_unknown_letter_raises_parse_error():
    with pytest.raises(ParseError):
        reduce(["z"], names=["x", "y"])


def test_commutator_convention(x, y):
    assert commutator(x, y) == reduce_letters([-1, -2, 1, 2])


def test_left_normed_commutator(x, y):
    assert commutator(x, y, y) == commutator(commutator(x, y), y)


def test_power_and_conjugate(x, y):
    assert (x * y) ** 0 == Word.identity()
    assert (x * y) ** -1 == y.inverse() * x.inverse()
    assert x.conjugate(y) == y.inverse() * x * y


@given(words(), words())
def test_reduction_idempotent(u, v):
    w = u * v
    assert reduce_letters(w.letters()) == w


@given(words())
def test_inverse_cancels(w):
    assert not (w * w.inverse())
    assert not (w.inverse() * w)


@given(words(), words(), words())
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(words(), words())
def test_commutator_inverse_identity(u, v):
    assert commutator(u, v).inverse() == commutator(v, u)


@given(words(), words(), words())
def test_hall_witt_style_product_rule(u, v, w):
    # [uv, w] = [u, w]^v [v, w]
    assert commutator(u * v, w) == commutator(u, w).conjugate(v) * commutator(v, w)


@given(words(3))
def test_exponent_sums_additive(w):
    assert [a + b for a, b in zip(w.exponent_sums(3), w.exponent_sums(3))] == (w * w).exponent_sums(3)


@given(words())
def test_cyclic_root_reconstructs(w):
    t, s, e = cyclic_root(w)
    assert t * s ** e * t.inverse() == w


@given(st.lists(words(3), min_size=0, max_size=4))
def test_parse_print_round_trip(rels):
    from relmod.presentation import Presentation

    p = Presentation(("x", "y", "z"), tuple(rels), name="rt")
    text = format_presentation(p)
    assert parse_presentation(text) == p


def test_parse_presentation_examples():
    p = parse_presentation("gens x; rels x^4;")
    assert p.rank == 1 and p.relators == (Word.gen(0, 4),)
    q = parse_presentation("gens x y; rels [x,y];")
    assert q.relators == (commutator(Word.gen(0), Word.gen(1)),)
    assert q.primes == (2, 3)


def test_headers_and_comments():
    p = parse_presentation("# comment\nname: t\nmode: pro-p\nprimes: 3\ngens x y; # trailing\nrels (x y)^-2;")
    assert (p.name, p.mode, p.primes) == ("t", "pro-p", (3,))
    assert p.relators[0] == (Word.gen(0) * Word.gen(1)) ** -2


def test_trivial_relator_and_empty_relators():
    p = parse_presentation("gens x y; rels 1, x;")
    assert p.relators[0] == Word.identity()
    assert parse_presentation("gens x y; rels ;").relators == ()


@pytest.mark.parametrize("text,line,col", [
    ("gens x y;\nrels x z;", 2, 8),
    ("gens x;\nrels x^;", 2, 8),
    ("gens x;\nrels x $;", 2, 8),
    ("gens x x; rels ;", 1, 8),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_presentation(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_limits_and_modes():
    with pytest.raises(ParseError):
        parse_presentation("gens a b c d e; rels ;")
    with pytest.raises(ParseError):
        parse_presentation("mode: pro-p\nprimes: 2, 3\ngens x; rels x^2;")
    with pytest.raises(ParseError):
        parse_presentation("primes: 4\ngens x; rels x^2;")
    with pytest.raises(PresentationError):
        from relmod.presentation import Presentation
        Presentation(("x",), (Word.gen(1),))


def test_subpresentations():
    p = parse_presentation("name: k\ngens x y; rels x^2, y^2, [x,y];")
    subs = p.subpresentations()
    assert [s.name for s in subs] == ["k-minus-0", "k-minus-1", "k-minus-2"]
    assert all(len(s.relators) == 2 for s in subs)
