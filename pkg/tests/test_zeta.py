import random

import numpy as np
import pytest

from suq2.parsing import parse
from suq2.rep import OpCommD, OpF, OpP, OpProd, OpScaled, OpSum, OpWord, from_algebra
from suq2.zeta import (ZetaEngine, dimension_spectrum_probe, fit_asymptotics,
                       hprime_closed_form, hprime_residue)


def test_fit_exact_polynomial():
    ns = np.arange(0, 30)
    series = (ns + 1.0) ** 2
    fit = fit_asymptotics(series, 2, 1e-10)
    assert fit is not None
    assert fit.coeffs == pytest.approx([1.0, 2.0, 1.0])
    assert fit.remainder_sum == pytest.approx(0.0, abs=1e-12)


def test_fit_with_geometric_remainder():
    ns = np.arange(0, 60)
    series = ns + 0.5 ** ns
    fit = fit_asymptotics(series, 2, 1e-10)
    assert fit.coeffs[1] == pytest.approx(1.0)
    assert fit.coeffs[2] == pytest.approx(0.0, abs=1e-12)
    # remainder sum over N >= 1 of q^N
    assert fit.remainder_sum == pytest.approx(1.0, abs=1e-10)


def test_battery_word_stabilises():
    eng = ZetaEngine(0.5, tol=1e-10, n_start=64)
    fit = eng.fit(OpWord(("b*", "b")), "full")
    assert fit.stabilized
    assert fit.window[1] <= 62
    assert fit.delta_max < 1e-10


def test_reference_residues():
    eng = ZetaEngine(0.5)
    one = OpWord(())
    assert eng.residue(one, 3) == pytest.approx(1.0, abs=1e-10)
    assert eng.residue(one, 2) == pytest.approx(2.0, abs=1e-10)
    assert eng.residue(one, 2, "p") == pytest.approx(1.0, abs=1e-10)
    assert eng.residue(OpF(), 2) == pytest.approx(0.0, abs=1e-10)
    assert eng.residue(OpF(), 1) == pytest.approx(1.0, abs=1e-10)
    assert eng.residue(OpF(), 3) == pytest.approx(-1.0, abs=1e-10)


def test_zeta0_reference_values():
    eng = ZetaEngine(0.0, n_start=32)
    e = OpWord(("b*", "b"))
    assert eng.zeta_value_at_zero(e) == pytest.approx(1 / 3, abs=1e-12)
    assert eng.zeta_value_at_zero(OpF()) == pytest.approx(0.5, abs=1e-12)
    for k in range(4):
        word = ("a*",) * k + ("b*", "b") + ("a",) * k
        val = eng.zeta_value_at_zero(OpProd((OpF(), OpWord(word))))
        assert val == pytest.approx(2 / 3 - k - k * k, abs=1e-10)


def test_epsilon_independence():
    op = OpWord(("b*", "b"))
    vals = [ZetaEngine(0.5, eps=e).residue(op, 1) for e in (0.5, 1.0, 2.0)]
    assert vals[0] == vals[1] == vals[2]
    # the zeta value at 0 is also independent (eps^-s -> 1 at s = 0)
    zs = [ZetaEngine(0.5, eps=e).zeta_value_at_zero(op) for e in (0.5, 1.0, 2.0)]
    assert zs[0] == pytest.approx(zs[1], abs=1e-14)
    assert zs[1] == pytest.approx(zs[2], abs=1e-14)


def test_truncation_monotonicity():
    op = OpWord(("a", "a*"))
    r1 = ZetaEngine(0.5, n_start=60).residue(op, 2)
    r2 = ZetaEngine(0.5, n_start=80).residue(op, 2)
    assert abs(r1 - r2) < 1e-10


def test_residue_linearity():
    eng = ZetaEngine(0.4)
    x, y = OpWord(("a", "a*")), OpWord(("b*", "b"))
    combo = OpSum((x, OpScaled(2, y)))
    for pole in (1, 2, 3):
        assert eng.residue(combo, pole) == pytest.approx(
            eng.residue(x, pole) + 2 * eng.residue(y, pole), abs=1e-11)


def test_residue_trace_property():
    # the residue functional is a trace: commutators of complementary
    # bidegree have vanishing integral against |D|^-3
    eng = ZetaEngine(0.45)
    rng = random.Random(9)
    pairs = [(("a",), ("a*",)), (("b",), ("b*",)), (("a", "b"), ("b*", "a*")),
             (("a", "b*"), ("b", "a*"))]
    for wx, wy in pairs:
        xy = OpWord(wx + wy)
        yx = OpWord(wy + wx)
        comm = OpSum((xy, OpScaled(-1, yx)))
        assert eng.residue(comm, 3) == pytest.approx(0.0, abs=1e-10)


def test_hprime_reference_values():
    assert hprime_residue("one", 1)["closed_form"] == -1.0
    assert hprime_residue("one", 2)["closed_form"] == 2.0
    for m in (1, 2, 3):
        assert hprime_residue("comm", 1, m=m)["level_model"] == pytest.approx(m * m, abs=1e-10)
        assert hprime_residue("nabla_comm", 3, m=m)["level_model"] == pytest.approx(4 * m * m, abs=1e-10)


def test_hprime_closed_form_is_exact_rational():
    vals = hprime_closed_form("comm", 2)
    assert vals[1] == 4.0 and vals[2] == pytest.approx(0.0)


def test_dimension_spectrum_probe():
    battery = {
        "a a*": from_algebra(parse("a a*")),
        "b* b": from_algebra(parse("b* b")),
        "a": from_algebra(parse("a")),
        "a b": from_algebra(parse("a b")),
        "b* b F": OpProd((OpWord(("b*", "b")), OpF())),
    }
    report = dimension_spectrum_probe(battery, 0.4, 1e-10)
    assert report["pass"]
    by_word = {item["word"]: item for item in report["items"]}
    assert by_word["a"]["structural_zero"] and by_word["a"]["all_traces_zero"]
    assert by_word["a b"]["structural_zero"]
    poles = by_word["a a*"]["poles"]
    assert abs(poles["s=3"]) > 1e-6  # genuinely three-dimensional word
