from fractions import Fraction

import pytest

from suq2.qseries import (G, R, c0, c1, eta_identity_defect,
                          fundamental_cancellation, lambda_coeffs,
                          lambda_sum_identity, poles_only_at_roots_of_unity,
                          printed_approximants, qbinom, qbinom_recursive,
                          recombination_identity)
from suq2.scalars import Poly, RationalFunc


def test_qbinom_boundary_and_smallest():
    for r in range(5):
        assert qbinom(r, 0) == RationalFunc.const(1)
        assert qbinom(r, r) == RationalFunc.const(1)
    assert qbinom(2, 1) == RationalFunc.const(1) + RationalFunc.q_power(2)


def test_qbinom_product_vs_recursion():
    for r in range(7):
        for k in range(r + 1):
            assert qbinom(r, k) == qbinom_recursive(r, k)


def test_lambda_recombination_exact():
    for r in range(1, 11):
        assert recombination_identity(r), r


def test_lambda_sum_identity():
    for r in range(1, 9):
        assert lambda_sum_identity(r), r


def test_lambda_r1_matches_product_form():
    lam = lambda_coeffs(1)
    assert len(lam) == 1
    # R(x) = -q^2 x / (1 - q^4 x); residue form gives lambda_0 = -q^6... the
    # recombination test covers the identity; spot-check the value at q=1/2
    val = lam[0].evaluate(Fraction(1, 2))
    assert val == -Fraction(1, 2) ** 6


def test_fundamental_cancellation():
    for r in range(1, 11):
        assert fundamental_cancellation(r), r


def test_c0_equals_minus_c1_numerically():
    for r in (1, 5):
        x = Fraction(2, 5)
        assert c0(r).evaluate(x) == -c1(r).evaluate(x)


def test_printed_fractions_match_assembly():
    printed = printed_approximants()
    for r in (1, 2, 3, 4):
        assert R(r) == printed[r], r


def test_poles_at_roots_of_unity():
    for r in range(1, 7):
        assert poles_only_at_roots_of_unity(R(r)), r
    # a fraction with a pole off the unit circle fails
    bad = RationalFunc(Poly.const(1), Poly([-2, 1]))  # pole at q = 2
    assert not poles_only_at_roots_of_unity(bad)


def test_G_examples():
    assert G(0.0).value == 0.0
    v1 = G(0.25, 1e-10)
    v2 = G(0.25, 1e-10)
    # self-consistency: agree with a much longer evaluation
    import math
    long = sum(n * 0.25 ** n / (1 - 0.25 ** n) for n in range(1, 500))
    assert abs(v1.value - long) <= v1.tail_bound + 1e-14
    assert v1.terms_used == v2.terms_used


def test_G_rejects_divergent_parameter():
    with pytest.raises(ValueError):
        G(1.0)


def test_eta_identity():
    for qsq in (0.09, 0.25, 0.5):
        report = eta_identity_defect(qsq)
        assert report["defect"] < 1e-8
