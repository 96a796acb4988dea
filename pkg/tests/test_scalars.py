import math
from fractions import Fraction

import pytest

from suq2.scalars import (FloatField, Poly, RationalFunc, SqrtField,
                          exact_sqrt, make_field)

RF = RationalFunc


def test_poly_arithmetic_and_gcd():
    q = Poly.var()
    p1 = (q + Poly.const(1)) * (q - Poly.const(1))
    assert p1 == Poly([-1, 0, 1])
    g = p1.gcd(q - Poly.const(1))
    assert g == Poly([-1, 1])
    quot, rem = p1.divmod(q - Poly.const(1))
    assert rem.is_zero() and quot == Poly([1, 1])


def test_poly_evaluate_exact_and_float():
    p = Poly([Fraction(1, 2), 0, 1])
    assert p.evaluate(Fraction(1, 3)) == Fraction(1, 2) + Fraction(1, 9)
    assert abs(p.evaluate(0.5) - 0.75) < 1e-15


def test_rational_func_reduction_and_ops():
    q = RF.var()
    one = RF.const(1)
    f = (one - q * q) / (one - q)
    assert f == one + q
    g = RF.q_power(-2)
    assert g.evaluate(Fraction(1, 2)) == 4
    assert (f * g - g * f).is_zero()
    assert (f / f) == one
    with pytest.raises(ZeroDivisionError):
        (one / (one - q)).evaluate(1)


def test_rational_func_decimate_even():
    f = RF.q_power(4) + RF.q_power(2).scale(3)
    g = f.decimate_even()
    assert g == RF.q_power(2) + RF.q_power(1).scale(3)


def test_exact_sqrt():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(Fraction(2)) is None
    assert exact_sqrt(Fraction(0)) == 0


def test_sqrt_field_products_fold():
    fld = SqrtField(Fraction(1, 2))
    s1 = fld.s(1)
    prod = s1 * s1
    assert prod == fld.from_fraction(Fraction(3, 4))
    # distinct radicals stay formal but evaluate correctly
    val = (fld.s(1) * fld.s(2)).evaluate()
    assert abs(val - math.sqrt(0.75) * math.sqrt(15 / 16)) < 1e-15


def test_sqrt_field_division_by_monomial():
    fld = SqrtField(Fraction(1, 3))
    x = fld.s(1) * fld.s(2)
    y = x / fld.s(2)
    assert y == fld.s(1)
    with pytest.raises(ValueError):
        x / (fld.s(1) + fld.one())


def test_sqrt_field_collapses_at_q_zero():
    fld = SqrtField(Fraction(0))
    assert fld.s(0) == fld.zero()     # sqrt(1 - q^0) = 0
    assert fld.s(3) == fld.one()      # sqrt(1 - 0) = 1
    assert (fld.s(2) * fld.s(5)).evaluate() == 1.0


def test_exact_matches_numeric_field():
    qe = Fraction(2, 5)
    exact = SqrtField(qe)
    numeric = FloatField(float(qe))
    expr_e = exact.q_pow(3) * exact.s(2) / exact.s(4)
    expr_n = numeric.q_pow(3) * numeric.s(2) / numeric.s(4)
    assert abs(expr_e.evaluate() - expr_n) < 1e-14 * abs(expr_n)


def test_make_field_modes():
    assert isinstance(make_field("1/2", "exact"), SqrtField)
    assert isinstance(make_field(0.5, "numeric"), FloatField)
    with pytest.raises(ValueError):
        make_field(0.5, "other")
