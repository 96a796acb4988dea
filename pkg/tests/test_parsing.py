from fractions import Fraction

import pytest

from suq2.algebra import AlgebraElement
from suq2.parsing import ParseError, parse
from suq2.rep import OpCommD, OpDelta, OpF, OpNabla, OpP, OpProd, OpWord


def test_basic_element():
    e = parse("a b* + 2 b^3")
    assert e.terms == {("a", "b*"): Fraction(1), ("b", "b", "b"): Fraction(2)}


def test_operator_promotion():
    assert parse("d(a)") == OpDelta(OpWord(("a",)))
    assert parse("D(b*)") == OpCommD(OpWord(("b*",)))
    assert parse("g(a a*)") == OpNabla(OpWord(("a", "a*")))
    op = parse("F a")
    assert isinstance(op, OpProd) and op.factors[0] == OpF()
    assert parse("P") == OpP()


def test_scalars_and_rationals():
    assert parse("1") == AlgebraElement.one()
    assert parse("3/4 a") == AlgebraElement.gen("a").scale(Fraction(3, 4))
    assert parse("0.25 b") == AlgebraElement.gen("b").scale(Fraction(1, 4))
    assert parse("2 a - a") == AlgebraElement.gen("a")


def test_negative_power_rejected():
    with pytest.raises(ParseError) as err:
        parse("a^-1")
    assert err.value.offset == 2


def test_unknown_token_offset():
    with pytest.raises(ParseError) as err:
        parse("a + z")
    assert err.value.offset == 4


def test_unbalanced_paren():
    with pytest.raises(ParseError):
        parse("(a b")


def test_juxtaposition_and_parens():
    assert parse("(a + b) a*") == (AlgebraElement.gen("a") + AlgebraElement.gen("b")) * AlgebraElement.gen("a*")
    assert parse("a^2") == AlgebraElement.from_word(("a", "a"))
    assert parse("a^0") == AlgebraElement.one()


def test_nested_wrappers():
    op = parse("d(d(b))")
    assert op == OpDelta(OpDelta(OpWord(("b",))))
