"""Residues and regularised zeta values from level-trace asymptotics.

For the operator class handled here the level traces satisfy

    c_N = lam_{d+1} N^d + ... + lam_2 N + lam_1 + r_N,

with r_N decaying faster than any power, so

    Trace(T |D|^-s) = sum_j lam_j zeta(s - (j-1)) + sum r_N N^-s + c_0 eps^-s

has only simple poles: the residue at s = k is the coefficient of N^(k-1),
and the value at s = 0 combines the zeta values at nonpositive integers with
the full remainder sum and the level-0 term (eps^-s -> 1 regardless of eps).
Polynomial coefficients are read off from finite differences once they have
stabilised below tolerance on a five-level window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import levels
from .algebra import AlgebraElement
from .rep import OpCommD, OpDelta, OpNabla, OpProd, OpScaled, OpSum, OpWord, from_algebra, nabla_count

# zeta(0), zeta(-1), ... zeta(-5); only nonpositive-integer values enter.
ZETA_AT_MINUS = (-0.5, -1.0 / 12.0, 0.0, 1.0 / 120.0, 0.0, -1.0 / 252.0)

_BASE_DEGREE = {"full": 2, "p": 1, "hprime": 1}

_MACHINE = float(np.finfo(float).eps)


class StabilizationError(RuntimeError):
    """Raised when finite differences fail to settle within the level cap."""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


@dataclass
class FitResult:
    """Fitted polynomial part of a level-trace series plus diagnostics."""

    coeffs: list          # coeffs[j] multiplies N^j
    degree: int
    window: tuple
    delta_max: float      # max |Delta^(deg+1) c| on the window
    remainder_sum: float  # sum over N >= 1 of (c_N - poly(N))
    tail_bound: float
    level0: float
    n_used: int
    stabilized: bool
    restriction: str = "full"
    remainder_ratio: float = 0.0

    def certificate(self) -> dict:
        return {
            "degree": self.degree,
            "window": list(self.window),
            "delta_max": self.delta_max,
            "n_used": self.n_used,
            "tail_bound": self.tail_bound,
            "remainder_ratio": self.remainder_ratio,
            "stabilized": self.stabilized,
            "restriction": self.restriction,
        }


def _newton_poly(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Monomial coefficients (ascending) of the interpolating polynomial."""
    k = len(xs)
    dd = np.array(ys, dtype=float)
    table = [dd.copy()]
    for order in range(1, k):
        prev = table[-1]
        cur = np.empty(k - order)
        for i in range(k - order):
            cur[i] = (prev[i + 1] - prev[i]) / (xs[i + order] - xs[i])
        table.append(cur)
    coeffs = np.zeros(k)
    basis = np.zeros(k)
    basis[0] = 1.0  # running product (x - x_0)...(x - x_{j-1})
    for j in range(k):
        coeffs[: j + 1] += table[j][0] * basis[: j + 1]
        if j + 1 < k:
            shifted = np.zeros(k)
            shifted[1: j + 2] = basis[: j + 1]
            shifted[: j + 1] -= xs[j] * basis[: j + 1]
            basis = shifted
    return coeffs


def fit_asymptotics(series: np.ndarray, degree: int, tol: float,
                    restriction: str = "full",
                    window_len: int = 5) -> FitResult | None:
    """Fit c_N = poly(N) + rapid remainder; None if not yet stabilised.

    series[n] must be the level-n trace, starting at n = 0.
    """
    c = np.asarray(series, dtype=float)
    m = len(c) - 1
    if m < degree + window_len + 3:
        return None
    diffs = np.diff(c, degree + 1)
    floor = max(tol, 32.0 * (2 ** (degree + 1)) * _MACHINE * max(1.0, float(np.max(np.abs(c)))))
    win = None
    for w in range(1, len(diffs) - window_len + 1):
        if np.max(np.abs(diffs[w:w + window_len])) < floor:
            win = (w, w + window_len)
            break
    if win is None:
        return None
    h = max(1, (m - win[0]) // (degree + 2))
    xs = np.array([m - j * h for j in range(degree + 1)][::-1], dtype=float)
    ys = np.array([c[int(x)] for x in xs])
    coeffs = _newton_poly(xs, ys)
    ns = np.arange(len(c), dtype=float)
    poly = np.zeros_like(ns)
    for j, a in enumerate(coeffs):
        poly += a * ns ** j
    r = c - poly
    tail = np.abs(r[-8:])
    ratio = 0.0
    for i in range(len(tail) - 1):
        if tail[i] > 0:
            ratio = max(ratio, min(tail[i + 1] / tail[i], 0.97))
    last = float(tail[-1])
    tail_bound = last * ratio / (1.0 - ratio) if ratio > 0 else last
    return FitResult(
        coeffs=[float(a) for a in coeffs],
        degree=degree,
        window=win,
        delta_max=float(np.max(np.abs(diffs[win[0]:win[1]]))),
        remainder_sum=float(np.sum(r[1:])),
        tail_bound=tail_bound,
        level0=float(c[0]),
        n_used=m,
        stabilized=True,
        restriction=restriction,
        remainder_ratio=ratio,
    )


class ZetaEngine:
    """Level traces, asymptotic fits, residues and zeta values for one value
    of the deformation parameter.  Results are cached per operator."""

    def __init__(self, q: float, eps: float = 1.0, tol: float = 1e-10,
                 n_start: int = 40, n_cap: int = 400):
        self.q = float(q)
        self.eps = float(eps)
        self.tol = float(tol)
        self.n_start = n_start
        self.n_cap = n_cap
        self._series: dict = {}
        self._fits: dict = {}

    # -- series ------------------------------------------------------------
    def _as_node(self, op):
        return from_algebra(op) if isinstance(op, AlgebraElement) else op

    def series(self, op, restriction: str, n_max: int) -> np.ndarray:
        op = self._as_node(op)
        key = (op, restriction)
        cur = self._series.get(key)
        have = -1 if cur is None else len(cur) - 1
        if have < n_max:
            ext = levels.trace_series(op, n_max, restriction, self.q, self.eps,
                                      n_min=have + 1)
            cur = ext if cur is None else np.concatenate([cur, ext])
            self._series[key] = cur
        return cur[: n_max + 1]

    def level_trace(self, op, n: int, restriction: str = "full") -> float:
        return float(self.series(op, restriction, n)[n])

    # -- fits ----------------------------------------------------------------
    def fit(self, op, restriction: str = "full") -> FitResult:
        op = self._as_node(op)
        key = (op, restriction)
        hit = self._fits.get(key)
        if hit is not None:
            return hit
        degree = _BASE_DEGREE[restriction] + nabla_count(op)
        n = self.n_start
        result = None
        while True:
            series = self.series(op, restriction, n)
            result = fit_asymptotics(series, degree, self.tol, restriction)
            if result is not None and result.tail_bound < self.tol:
                break
            if n >= self.n_cap:
                if result is not None:
                    break
                diffs = np.diff(series, degree + 1)
                achieved = float(np.min(np.abs(diffs))) if len(diffs) else float("nan")
                raise StabilizationError(
                    f"level traces did not stabilise by N={n} "
                    f"(best |Delta^{degree + 1}| = {achieved:.3e})", achieved)
            n = min(2 * n, self.n_cap)
        self._fits[key] = result
        return result

    # -- functionals -------------------------------------------------------
    def residue(self, op, pole: int, restriction: str = "full") -> float:
        """Residue at s = pole of Trace(op |D|^-s) over the restriction;
        equals the noncommutative integral of op |D|^-pole."""
        if pole < 1:
            raise ValueError("poles live in {1, 2, 3, ...}")
        fit = self.fit(op, restriction)
        j = pole - 1
        return fit.coeffs[j] if j < len(fit.coeffs) else 0.0

    def zeta_value_at_zero(self, op, restriction: str = "full") -> float:
        """Trace(op |D|^-s) continued to s = 0 (kernel counted via eps^-s -> 1)."""
        fit = self.fit(op, restriction)
        val = fit.remainder_sum + fit.level0
        for j, a in enumerate(fit.coeffs):
            val += a * ZETA_AT_MINUS[j]
        return val

    def trace_total(self, op, max_n: int | None = None) -> tuple[float, dict]:
        """Plain trace of a trace-class expression, summed level by level
        until five consecutive levels fall below tolerance."""
        op = self._as_node(op)
        cap = max_n or self.n_cap
        small = 0
        total = 0.0
        cert = {"n_used": 0, "tail_last": 0.0, "converged": False}
        n = 0
        while n <= cap:
            c = self.level_trace(op, n)
            total += c
            cert["n_used"] = n
            cert["tail_last"] = abs(c)
            if abs(c) < self.tol * 1e-2:
                small += 1
                if small >= 5:
                    cert["converged"] = True
                    return total, cert
            else:
                small = 0
            n += 1
        raise StabilizationError(
            f"trace tail did not fall below tolerance by N={cap}", cert["tail_last"])


# ---------------------------------------------------------------------------
# q = 0 reference sector: closed forms on l2(Z) (x) l2(N+)

def _exp_sums():
    """Laurent data (coefficients of t^-2, t^-1, t^0, t^1) for the basic sums."""
    # sum_{n>=1} e^{-tn} = 1/t - 1/2 + t/12 + O(t^3)
    # sum_{n>=1} n e^{-tn} = 1/t^2 - 1/12 + O(t^2)
    return {
        "geo": (Fraction(0), Fraction(1), Fraction(-1, 2), Fraction(1, 12)),
        "lin": (Fraction(1), Fraction(0), Fraction(-1, 12), Fraction(0)),
    }


def _laurent_mul(a: tuple, b: tuple) -> tuple:
    """Product of two Laurent expansions indexed (t^-2, t^-1, 1, t), keeping
    down to t^-3 ... t^-1 and the constant term: returns (t^-3, t^-2, t^-1, 1)."""
    out = [Fraction(0)] * 4  # exponents -3, -2, -1, 0
    expo = (-2, -1, 0, 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj == 0:
                continue
            e = expo[i] + expo[j]
            if -3 <= e <= 0:
                out[e + 3] += ai * bj
    return tuple(out)


def _theta_z(diag) -> tuple:
    """Expansion of sum_{n in Z} d(n) e^{-t|n|} for d affine at both ends.

    diag(n) must be exact (int/Fraction); affinity is detected from the
    sampled tails.  Returns Laurent coefficients of (t^-2, t^-1, 1, t).
    """
    probe = 64
    beta_p = diag(probe + 1) - diag(probe)
    alpha_p = diag(probe) - beta_p * probe
    beta_m = diag(-probe - 1) - diag(-probe)
    alpha_m = diag(-probe) - beta_m * probe
    if diag(2 * probe) != alpha_p + beta_p * 2 * probe:
        raise ValueError("positive tail is not affine")
    if diag(-2 * probe) != alpha_m + beta_m * 2 * probe:
        raise ValueError("negative tail is not affine")
    sums = _exp_sums()
    geo, lin = sums["geo"], sums["lin"]
    # n >= 1 and n <= -1 tails plus the n = 0 term
    co = [Fraction(0)] * 4
    for alpha, beta in ((alpha_p, beta_p), (alpha_m, beta_m)):
        for i in range(4):
            co[i] += alpha * geo[i] + beta * lin[i]
    co[2] += diag(0)
    # finite corrections where d(n) deviates from its affine tails
    for n in range(1, probe + 1):
        for sgn, alpha, beta in ((1, alpha_p, beta_p), (-1, alpha_m, beta_m)):
            dev = diag(sgn * n) - (alpha + beta * n)
            if dev:
                co[2] += dev          # e^{-tn} ~ 1 - tn
                co[3] += -dev * n
    return tuple(co)


def _hprime_closed_residues(diag_pairs) -> dict:
    """Residues at s = 1, 2, 3 of Trace(T |D'|^-s) on l2(Z) (x) l2(N+), for
    T = sum of diag_z (x) weight terms; diag_pairs is a list of
    (diag callable on Z, weight in {'one','num'}, scalar)."""
    sums = _exp_sums()
    total = [Fraction(0)] * 4  # t^-3 .. t^0
    for diag, weight, scal in diag_pairs:
        za = _theta_z(diag)
        zb = sums["geo"] if weight == "one" else sums["lin"]
        prod = _laurent_mul(za, zb)
        total = [t + scal * p for t, p in zip(total, prod)]
    gamma = {1: 1, 2: 1, 3: 2}  # Gamma(k)
    return {k: float(total[3 - k] / gamma[k]) for k in (1, 2, 3)}


def hprime_closed_form(kind: str, m: int = 1) -> dict:
    """Closed-form residues over the reference sector, via the factorised
    model where the b generator acts as the bilateral shift U and
    |D'| = |D_0| (x) 1 + 1 (x) N."""

    def absv(n):
        return n if n >= 0 else -n

    if kind == "one":
        pairs = [(lambda n: 1, "one", Fraction(1))]
    elif kind == "comm":
        pairs = [(lambda n: absv(n + m) - absv(n), "one", Fraction(1))]
    elif kind == "nabla_comm":
        pairs = [
            (lambda n: (absv(n + m) ** 2 - n ** 2) * (absv(n + m) - absv(n)),
             "one", Fraction(1)),
            (lambda n: (absv(n + m) - absv(n)) ** 2, "num", Fraction(2)),
        ]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return _hprime_closed_residues(pairs)


def hprime_ops(kind: str, m: int = 1):
    """The same operators as (N, x, y)-model expressions (q = 0).

    The reference sector carries the negative part of D, so the factorised
    model's commutator with its positive operator corresponds to delta =
    [|D|, .] here, not to [D, .]."""
    word_b = OpWord(("b",) * m)
    word_bs = OpWord(("b*",) * m)
    if kind == "one":
        return OpWord(())
    if kind == "comm":
        return OpProd((word_bs, OpDelta(word_b)))
    if kind == "nabla_comm":
        return OpProd((word_bs, OpNabla(OpDelta(word_b))))
    raise ValueError(f"unknown kind {kind!r}")


def hprime_residue(kind: str, pole: int, m: int = 1,
                   tol: float = 1e-10) -> dict:
    """Residue over the reference sector at q = 0, computed two ways (level
    counting on the (N, x, y) model, and the closed-form expansion) and
    cross-checked."""
    engine = ZetaEngine(0.0, tol=tol)
    level_value = engine.residue(hprime_ops(kind, m), pole, restriction="hprime")
    closed = hprime_closed_form(kind, m)[pole]
    if abs(level_value - closed) > max(tol, 1e-9):
        raise StabilizationError(
            f"reference-sector routes disagree: {level_value} vs {closed}",
            abs(level_value - closed))
    return {"kind": kind, "m": m, "pole": pole, "level_model": level_value,
            "closed_form": closed, "difference": abs(level_value - closed)}


# ---------------------------------------------------------------------------
# dimension spectrum probe

def dimension_spectrum_probe(exprs: dict, q: float, tol: float = 1e-10,
                             eps: float = 1.0) -> dict:
    """For each named expression: certify polynomial-plus-rapid-decay level
    traces with poles within {1,2,3} (degree <= 2), or identically zero
    traces when no branch path returns to the diagonal."""
    engine = ZetaEngine(q, eps=eps, tol=tol)
    items = []
    ok = True
    for name, op in exprs.items():
        node = engine._as_node(op)
        if not levels.has_diagonal_path(node):
            series = engine.series(node, "full", 20)
            zero = bool(np.all(series == 0.0))
            items.append({"word": name, "structural_zero": True,
                          "all_traces_zero": zero, "pass": zero})
            ok &= zero
            continue
        try:
            fit = engine.fit(node, "full")
        except StabilizationError as exc:
            items.append({"word": name, "structural_zero": False,
                          "pass": False, "error": str(exc)})
            ok = False
            continue
        poles = {
            "s=3": fit.coeffs[2] if len(fit.coeffs) > 2 else 0.0,
            "s=2": fit.coeffs[1],
            "s=1": fit.coeffs[0],
        }
        items.append({
            "word": name, "structural_zero": False, "poles": poles,
            "certificate": fit.certificate(), "pass": fit.stabilized,
        })
        ok &= fit.stabilized
    return {"q": q, "tol": tol, "items": items, "pass": ok}
