"""Vectorised level traces.

The partial trace of an operator expression over the level-N eigenspace of
|D| is computed exactly (up to float rounding): the expression is unfolded
into displacement components ("how far the word has moved (level, x, y) so
far"), each carrying an array of coefficients over the source grid, and the
trace reads off the zero-displacement component.  No truncation enters: every
branch of every word is followed, and boundary vanishing is enforced by the
same masks that make the coefficient formulas exact.

Restrictions: 'full' (the whole level), 'p' (the sector {x = N} fixed by the
sign of D), 'hprime' (the q = 0 reference sector {x = 0 or y = 0} minus the
two extremal lines and the level-0 vector).
"""

from __future__ import annotations

import numpy as np

from .rep import (OpAbsD, OpCommD, OpDelta, OpEquiv, OpF, OpNabla, OpP,
                  OpProd, OpScaled, OpSum, OpWord, from_algebra)
from .algebra import AlgebraElement

RESTRICTIONS = ("full", "p", "hprime")


def _sq(q: float, m) -> np.ndarray:
    """sqrt(1 - q^(2m)) with the exponent clipped; invalid entries are
    removed by the caller's mask."""
    return np.sqrt(1.0 - q ** (2.0 * np.maximum(m, 0)))


def _pw(q: float, e) -> np.ndarray:
    return q ** np.maximum(e, 0)


def _letter_branches(letter: str, q: float, n: int, X, Y):
    """Branches of a generator letter at source点 (n, X, Y): list of
    ((dn, dx, dy), coefficient array).  X, Y are integer arrays; entries
    outside the index cone at level n contribute zero."""
    star = "*" in letter
    base = letter[0] + ("*" if star else "")
    suffix = letter[len(base):]
    src = (X >= 0) & (X <= n) & (Y >= 0) & (Y <= n)
    out = []
    if n < 0:
        return out
    up_den = _sq(q, n + 1) * _sq(q, n + 2)
    down_den = (_sq(q, n) * _sq(q, n + 1)) if n >= 1 else None
    if base == "a":
        if suffix in ("", "+"):
            c = _pw(q, X + Y + 1) * _sq(q, n - Y + 1) * _sq(q, n - X + 1) / up_den
            out.append(((1, 0, 0), np.where(src, c, 0.0)))
        if suffix in ("", "-") and n >= 1:
            c = _sq(q, Y) * _sq(q, X) / down_den
            m = src & (X >= 1) & (Y >= 1)
            out.append(((-1, -1, -1), np.where(m, c, 0.0)))
    elif base == "a*":
        if suffix in ("", "+"):
            c = _sq(q, Y + 1) * _sq(q, X + 1) / up_den
            out.append(((1, 1, 1), np.where(src, c, 0.0)))
        if suffix in ("", "-") and n >= 1:
            c = _pw(q, X + Y + 1) * _sq(q, n - Y) * _sq(q, n - X) / down_den
            m = src & (X <= n - 1) & (Y <= n - 1)
            out.append(((-1, 0, 0), np.where(m, c, 0.0)))
    elif base == "b":
        if suffix in ("", "+"):
            c = -_pw(q, Y) * _sq(q, n - Y + 1) * _sq(q, X + 1) / up_den
            out.append(((1, 1, 0), np.where(src, c, 0.0)))
        if suffix in ("", "-") and n >= 1:
            c = _pw(q, X) * _sq(q, Y) * _sq(q, n - X) / down_den
            m = src & (Y >= 1) & (X <= n - 1)
            out.append(((-1, 0, -1), np.where(m, c, 0.0)))
    elif base == "b*":
        if suffix in ("", "+"):
            c = _pw(q, X) * _sq(q, Y + 1) * _sq(q, n + 1 - X) / up_den
            out.append(((1, 0, 1), np.where(src, c, 0.0)))
        if suffix in ("", "-") and n >= 1:
            c = -_pw(q, Y) * _sq(q, n - Y) * _sq(q, X) / down_den
            m = src & (X >= 1) & (Y <= n - 1)
            out.append(((-1, -1, 0), np.where(m, c, 0.0)))
    else:
        raise ValueError(f"unknown letter {letter!r}")
    return out


class _Frame:
    """Evaluation context for one source level."""

    __slots__ = ("q", "eps", "N", "X", "Y")

    def __init__(self, q: float, eps: float, N: int, X, Y):
        self.q = q
        self.eps = eps
        self.N = N
        self.X = X
        self.Y = Y

    def d_eigen(self, d):
        lvl = self.N + d[0]
        xk = self.X + d[1]
        return np.where(xk == lvl, float(lvl), -float(lvl))

    def abs_pow(self, d, z):
        lvl = self.N + d[0]
        base = self.eps if lvl == 0 else float(lvl)
        return base ** float(z)


def _merge(into: dict, d, arr):
    cur = into.get(d)
    into[d] = arr if cur is None else cur + arr


def _apply(op, wf: dict, fr: _Frame) -> dict:
    """Push a wavefront {displacement: coefficient array} through op."""
    if isinstance(op, AlgebraElement):
        op = from_algebra(op)
    if isinstance(op, OpWord):
        cur = wf
        for letter in reversed(op.letters):
            nxt: dict = {}
            for d, arr in cur.items():
                if not np.any(arr):
                    continue
                n_mid = fr.N + d[0]
                for dd, coeff in _letter_branches(letter, fr.q, n_mid,
                                                  fr.X + d[1], fr.Y + d[2]):
                    _merge(nxt, (d[0] + dd[0], d[1] + dd[1], d[2] + dd[2]),
                           arr * coeff)
            cur = nxt
        return dict(cur) if cur is wf else cur
    if isinstance(op, OpF):
        out = {}
        for d, arr in wf.items():
            lvl = fr.N + d[0]
            out[d] = arr * np.where(fr.X + d[1] == lvl, 1.0, -1.0)
        return out
    if isinstance(op, OpP):
        out = {}
        for d, arr in wf.items():
            lvl = fr.N + d[0]
            out[d] = arr * (fr.X + d[1] == lvl)
        return out
    if isinstance(op, OpAbsD):
        return {d: arr * fr.abs_pow(d, op.z) for d, arr in wf.items()}
    if isinstance(op, OpScaled):
        inner = _apply(op.op, wf, fr)
        return {d: float(op.coeff) * arr for d, arr in inner.items()}
    if isinstance(op, OpSum):
        out: dict = {}
        for t in op.terms:
            for d, arr in _apply(t, wf, fr).items():
                _merge(out, d, arr)
        return out
    if isinstance(op, OpProd):
        cur = wf
        for f in reversed(op.factors):
            cur = _apply(f, cur, fr)
        return cur
    if isinstance(op, (OpDelta, OpNabla, OpCommD)):
        out: dict = {}
        for d_in, arr in wf.items():
            sub = _apply(op.op, {d_in: arr}, fr)
            for d_out, brr in sub.items():
                if isinstance(op, OpDelta):
                    factor = float(d_out[0] - d_in[0])
                elif isinstance(op, OpNabla):
                    lo, li = fr.N + d_out[0], fr.N + d_in[0]
                    factor = float(lo * lo - li * li)
                else:
                    factor = fr.d_eigen(d_out) - fr.d_eigen(d_in)
                _merge(out, d_out, brr * factor)
        return out
    if isinstance(op, OpEquiv):
        raise ValueError("equivariance generators have no level-trace path")
    raise TypeError(f"unsupported node {type(op).__name__}")


def _source_grid(n: int, restriction: str):
    if restriction == "full":
        X, Y = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
        return X.ravel(), Y.ravel()
    if restriction == "p":
        return np.full(n + 1, n, dtype=np.int64), np.arange(n + 1)
    if restriction == "hprime":
        if n == 0:
            return np.array([], dtype=np.int64), np.array([], dtype=np.int64)
        xs, ys = [], []
        for y in range(n + 1):
            if y != n:
                xs.append(0)
                ys.append(y)
        for x in range(1, n + 1):
            if x != n:
                xs.append(x)
                ys.append(0)
        return np.array(xs, dtype=np.int64), np.array(ys, dtype=np.int64)
    raise ValueError(f"unknown restriction {restriction!r}")


def level_trace(op, n: int, restriction: str = "full",
                q: float = 0.5, eps: float = 1.0) -> float:
    """Exact partial trace of op over the restricted level-n basis."""
    X, Y = _source_grid(n, restriction)
    if X.size == 0:
        return 0.0
    fr = _Frame(float(q), float(eps), n, X, Y)
    wf = {(0, 0, 0): np.ones_like(X, dtype=np.float64)}
    out = _apply(op, wf, fr)
    diag = out.get((0, 0, 0))
    return float(diag.sum()) if diag is not None else 0.0


def trace_series(op, n_max: int, restriction: str = "full",
                 q: float = 0.5, eps: float = 1.0, n_min: int = 0) -> np.ndarray:
    return np.array([level_trace(op, n, restriction, q, eps)
                     for n in range(n_min, n_max + 1)])


def reachable_displacements(op) -> set:
    """Displacement lattice points an expression can move a basis vector by;
    used to certify identically-zero traces (no path returns to the start)."""
    if isinstance(op, AlgebraElement):
        op = from_algebra(op)
    if isinstance(op, OpWord):
        pts = {(0, 0, 0)}
        shifts = {
            "a": [(1, 0, 0), (-1, -1, -1)], "a*": [(1, 1, 1), (-1, 0, 0)],
            "b": [(1, 1, 0), (-1, 0, -1)], "b*": [(1, 0, 1), (-1, -1, 0)],
        }
        for letter in op.letters:
            star = "*" in letter
            base = letter[0] + ("*" if star else "")
            suffix = letter[len(base):]
            opts = shifts[base]
            if suffix == "+":
                opts = opts[:1]
            elif suffix == "-":
                opts = opts[1:]
            pts = {(d[0] + s[0], d[1] + s[1], d[2] + s[2])
                   for d in pts for s in opts}
        return pts
    if isinstance(op, (OpF, OpP, OpAbsD, OpEquiv)):
        return {(0, 0, 0)}
    if isinstance(op, OpScaled):
        return reachable_displacements(op.op)
    if isinstance(op, (OpDelta, OpNabla, OpCommD)):
        return reachable_displacements(op.op)
    if isinstance(op, OpSum):
        out = set()
        for t in op.terms:
            out |= reachable_displacements(t)
        return out
    if isinstance(op, OpProd):
        pts = {(0, 0, 0)}
        for f in op.factors:
            fs = reachable_displacements(f)
            pts = {(a[0] + b[0], a[1] + b[1], a[2] + b[2])
                   for a in pts for b in fs}
        return pts
    raise TypeError(f"unsupported node {type(op).__name__}")


def has_diagonal_path(op) -> bool:
    return (0, 0, 0) in reachable_displacements(op)
