import random

import numpy as np
import pytest

from suq2.levels import has_diagonal_path, level_trace, trace_series, _source_grid
from suq2.parsing import parse
from suq2.rep import (Evaluator, OpCommD, OpDelta, OpF, OpNabla, OpP, OpProd,
                      OpWord, from_algebra)

LETTERS = ["a", "a*", "b", "b*"]


def naive_trace(op, n, restriction, q):
    ev = Evaluator(q, "numeric")
    X, Y = _source_grid(n, restriction)
    total = 0.0
    for x, y in zip(X.tolist(), Y.tolist()):
        v = (n, int(x), int(y))
        total += ev.apply(op, ev.basis_state(v)).get(v, 0.0)
    return total


def test_counting_traces():
    for n in (0, 1, 4, 13):
        assert level_trace(OpWord(()), n, "full", 0.4) == pytest.approx((n + 1) ** 2)
        assert level_trace(OpWord(()), n, "p", 0.4) == pytest.approx(n + 1)
        expected = 2 * n - 1 if n >= 1 else 0
        assert level_trace(OpWord(()), n, "hprime", 0.4) == pytest.approx(expected)


def test_projection_trace():
    for n in (0, 2, 7):
        assert level_trace(OpP(), n, "full", 0.5) == pytest.approx(n + 1)


def test_kernel_matches_naive_evaluator():
    rng = random.Random(42)
    q = 0.57
    for trial in range(30):
        w = tuple(rng.choice(LETTERS) for _ in range(rng.randint(1, 4)))
        op = OpWord(w)
        if trial % 3 == 1:
            op = OpDelta(op)
        if trial % 4 == 2:
            op = OpNabla(op)
        if trial % 5 == 3:
            op = OpCommD(op)
        if trial % 7 == 4:
            op = OpProd((OpF(), op))
        n = rng.randint(0, 8)
        restriction = rng.choice(["full", "p", "hprime"])
        a = level_trace(op, n, restriction, q)
        b = naive_trace(op, n, restriction, q)
        assert abs(a - b) < 1e-11, (w, n, restriction)


def test_off_bidegree_traces_vanish_structurally():
    for text in ["a", "b", "a b", "a b*", "a a b"]:
        op = from_algebra(parse(text))
        assert not has_diagonal_path(op)
        series = trace_series(op, 12, "full", 0.6)
        assert np.all(series == 0.0)


def test_diagonal_path_detection():
    assert has_diagonal_path(OpWord(("a", "a*")))
    assert has_diagonal_path(OpWord(("b*", "b")))
    assert not has_diagonal_path(OpWord(("a+",)))


def test_shift_identity_at_q0():
    # conjugating by the k-th power of the coisometry shifts the level
    # variable of the trace series (the degenerate permutation identity)
    q = 0.0
    inner = ("b*", "b")
    for k in (1, 2, 3):
        conj = OpWord(("a*",) * k + inner + ("a",) * k)
        base = OpWord(inner)
        for n in range(k, 12):
            lhs = level_trace(conj, n, "full", q)
            rhs = level_trace(base, n - k, "full", q)
            assert abs(lhs - rhs) < 1e-12
