import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from suq2.algebra import (AlgebraElement, LaurentPoly, alpha_power, monomial,
                          word_bidegree, word_del_degree)
from suq2.parsing import parse

LETTERS = ["a", "a*", "b", "b*"]

words = st.lists(st.sampled_from(LETTERS), min_size=0, max_size=5).map(tuple)


def rand_element(rng, terms=3, max_len=4):
    out = AlgebraElement.zero()
    for _ in range(terms):
        w = tuple(rng.choice(LETTERS) for _ in range(rng.randint(0, max_len)))
        out = out + AlgebraElement.from_word(w, Fraction(rng.randint(-3, 3)))
    return out


def test_bidegree_examples():
    assert word_bidegree(("a*", "b")) == (-1, 1)
    assert word_bidegree(("a",) * 3 + ("a*",) * 3) == (0, 0)
    assert word_bidegree(("b*", "b")) == (0, 0)


def test_bidegree_additive_under_concatenation():
    rng = random.Random(1)
    for _ in range(50):
        w1 = tuple(rng.choice(LETTERS) for _ in range(rng.randint(0, 4)))
        w2 = tuple(rng.choice(LETTERS) for _ in range(rng.randint(0, 4)))
        b1, b2, b12 = word_bidegree(w1), word_bidegree(w2), word_bidegree(w1 + w2)
        assert b12 == (b1[0] + b2[0], b1[1] + b2[1])
        assert word_del_degree(w1 + w2) == word_del_degree(w1) + word_del_degree(w2)


@settings(max_examples=60, deadline=None)
@given(words)
def test_adjoint_involution(w):
    x = AlgebraElement.from_word(w, Fraction(3, 2))
    assert x.adjoint().adjoint() == x


def test_adjoint_antihomomorphism():
    rng = random.Random(7)
    for _ in range(30):
        x, y = rand_element(rng), rand_element(rng)
        assert (x * y).adjoint() == y.adjoint() * x.adjoint()


def test_sigma_examples():
    assert AlgebraElement.from_word(("a",) * 3).sigma() == LaurentPoly({3: Fraction(1)})
    assert AlgebraElement.from_word(("a*", "b", "a")).sigma().is_zero()
    assert AlgebraElement.from_word(("a", "a*")).sigma() == LaurentPoly({0: Fraction(1)})


def test_sigma_multiplicative():
    rng = random.Random(11)
    for _ in range(30):
        x, y = rand_element(rng), rand_element(rng)
        assert (x * y).sigma() == x.sigma() * y.sigma()


def test_del_component_examples():
    a, b = AlgebraElement.gen("a"), AlgebraElement.gen("b")
    x = a + b
    assert x.del_component(-1) == a
    e = AlgebraElement.from_word(("b*", "b"))
    assert e.del_component(0) == e
    assert (a * b).del_component(5).is_zero()


def test_monomial_and_alpha_power():
    assert monomial(1, 2, 0).words() == [("a*", "b", "b")]
    assert monomial(0, -1, 1).words() == [("b*", "a")]
    assert monomial(0, 0, 0).words() == [("b*", "b")]
    assert alpha_power(-2).words() == [("a*", "a*")]
    assert alpha_power(0) == AlgebraElement.one()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(words, st.integers(-3, 3)), min_size=1, max_size=3))
def test_parse_print_round_trip(data):
    x = AlgebraElement.zero()
    for w, c in data:
        x = x + AlgebraElement.from_word(w, Fraction(c))
    if x.is_zero():
        return
    assert parse(x.to_source()) == x


def test_laurent_derivative():
    p = LaurentPoly({2: 1.0, -1: 2.0})
    d = p.derivative()
    assert d.fourier(2) == complex(0, 2)
    assert d.fourier(-1) == complex(0, -2)
    assert LaurentPoly({0: 1.0}).derivative().is_zero()
