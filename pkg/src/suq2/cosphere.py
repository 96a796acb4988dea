"""Symbol calculus on the cosphere bundle.

Generators split into level-raising and level-lowering halves; the symbol
morphism sends each half to a simple tensor of quantum-disk operators times a
power of the circle generator recording the geodesic-flow degree:

    a+ -> -q b* (x) b (x) u        a- -> a (x) a (x) u*
    b+ ->    a* (x) b (x) u        b- -> b (x) a (x) u*

(+ disk acts on the x index, - disk on the y index; adjoints star both legs
and invert u).  Compressing the product representation back to the index cone
reproduces the original operator up to a smoothing remainder, which is what
makes the residue formulas local.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement
from .rep import Evaluator, from_algebra

_SIGNED = {
    "a": ("a+", "a-"), "a*": ("a*+", "a*-"),
    "b": ("b+", "b-"), "b*": ("b*+", "b*-"),
}

# rho on signed letters: (plus-disk letter, minus-disk letter, u degree, coeff-kind)
# coeff-kind 'q' marks the single -q prefactor of the a+ image.
_RHO = {
    "a+": (("b*",), ("b",), 1, "-q"),
    "a-": (("a",), ("a",), -1, "1"),
    "b+": (("a*",), ("b",), 1, "1"),
    "b-": (("b",), ("a",), -1, "1"),
    "a*-": (("b",), ("b*",), -1, "-q"),
    "a*+": (("a*",), ("a*",), 1, "1"),
    "b*-": (("a",), ("b*",), -1, "1"),
    "b*+": (("b*",), ("a*",), 1, "1"),
}


def decompose_word(word: tuple) -> list[tuple]:
    """Expand a plain word into its 2^len signed branches: list of signed
    letter tuples."""
    branches = [()]
    for letter in word:
        if letter in _SIGNED:
            up, down = _SIGNED[letter]
            branches = [br + (s,) for br in branches for s in (up, down)]
        else:
            branches = [br + (letter,) for br in branches]
    return branches


def decompose(x: AlgebraElement) -> list[tuple]:
    """All signed branches of an element: list of (coeff, signed word)."""
    out = []
    for w, c in x.terms.items():
        for br in decompose_word(w):
            out.append((c, br))
    return out


def geodesic_degree(signed_word: tuple) -> int:
    return sum(1 if s.endswith("+") else -1 for s in signed_word)


@dataclass(frozen=True)
class SymbolTerm:
    coeff: float
    plus: tuple   # word acting through the + disk
    minus: tuple  # word acting through the - disk
    udeg: int


class SymbolElement:
    """Finite sum of (disk (x) disk (x) circle) monomials."""

    def __init__(self, terms: list[SymbolTerm]):
        self.terms = [t for t in terms if t.coeff != 0]

    def degree0(self) -> "SymbolElement":
        return SymbolElement([t for t in self.terms if t.udeg == 0])

    def u_degrees(self) -> set:
        return {t.udeg for t in self.terms}

    def __add__(self, other: "SymbolElement") -> "SymbolElement":
        return SymbolElement(self.terms + other.terms)

    def __mul__(self, other: "SymbolElement") -> "SymbolElement":
        out = []
        for s in self.terms:
            for t in other.terms:
                out.append(SymbolTerm(s.coeff * t.coeff, s.plus + t.plus,
                                      s.minus + t.minus, s.udeg + t.udeg))
        return SymbolElement(out)

    def adjoint(self) -> "SymbolElement":
        star = {"a": "a*", "a*": "a", "b": "b*", "b*": "b"}
        out = []
        for t in self.terms:
            out.append(SymbolTerm(
                t.coeff,
                tuple(star[x] for x in reversed(t.plus)),
                tuple(star[x] for x in reversed(t.minus)),
                -t.udeg))
        return SymbolElement(out)

    def __repr__(self):
        return f"SymbolElement({self.terms!r})"


def rho_signed(signed_word: tuple, q: float) -> SymbolTerm:
    """Symbol of a single signed branch word (a monomial)."""
    coeff = 1.0
    plus: tuple = ()
    minus: tuple = ()
    udeg = 0
    for s in signed_word:
        image = _RHO[s]
        plus = plus + image[0]
        minus = minus + image[1]
        udeg += image[2]
        if image[3] == "-q":
            coeff *= -q
    return SymbolTerm(coeff, plus, minus, udeg)


def rho(x: AlgebraElement, q: float) -> SymbolElement:
    return SymbolElement([
        SymbolTerm(float(c) * t.coeff, t.plus, t.minus, t.udeg)
        for c, br in decompose(x)
        for t in (rho_signed(br, q),)])


# ---------------------------------------------------------------------------
# quantum-disk representations and the trace functionals

def disk_diag(word: tuple, channel: int, q: float, xs: np.ndarray) -> np.ndarray:
    """Diagonal matrix elements <w e_x, e_x> of a disk word (channel +1 or
    -1 fixes the sign of the b image); zero unless the word is balanced."""
    shift = 0
    coeff = np.ones_like(xs, dtype=float)
    for letter in reversed(word):
        cur = xs + shift
        valid = cur >= 0
        safe = np.maximum(cur, 0)
        if letter == "a":
            coeff = coeff * np.where(valid, np.sqrt(1.0 - q ** (2.0 * safe)), 0.0)
            shift -= 1
        elif letter == "a*":
            coeff = coeff * np.where(valid, np.sqrt(1.0 - q ** (2.0 * safe + 2)), 0.0)
            shift += 1
        elif letter in ("b", "b*"):
            sgn = channel
            coeff = coeff * np.where(valid, sgn * q ** (1.0 * safe), 0.0)
        else:
            raise ValueError(f"unknown disk letter {letter!r}")
    if shift != 0:
        return np.zeros_like(xs, dtype=float)
    return coeff


def disk_apply(word: tuple, channel: int, q: float, x: int):
    """Apply a disk word to a single basis vector: (target index, coeff),
    or None if the path dies at the boundary."""
    coeff = 1.0
    cur = x
    for letter in reversed(word):
        if cur < 0:
            return None
        if letter == "a":
            if cur == 0:
                return None
            coeff *= math.sqrt(1.0 - q ** (2 * cur))
            cur -= 1
        elif letter == "a*":
            coeff *= math.sqrt(1.0 - q ** (2 * cur + 2))
            cur += 1
        elif letter in ("b", "b*"):
            coeff *= channel * q ** cur
        else:
            raise ValueError(f"unknown disk letter {letter!r}")
    if coeff == 0.0:
        return None
    return cur, coeff


def tau1(word: tuple) -> float:
    """Haar functional through the circle symbol: 1 for balanced words in
    the unitary generator only, else 0."""
    if any(x in ("b", "b*") for x in word):
        return 0.0
    ups = sum(1 for x in word if x == "a*")
    return 1.0 if ups * 2 == len(word) else 0.0


def tau0(word: tuple, channel: int, q: float, tol: float = 1e-12,
         x_cap: int = 4000) -> float:
    """Regularised trace: limit of Trace_N - tau1 * N, summed with a
    five-point stabilisation window."""
    t1 = tau1(word)
    total = t1  # constant offset: sum_{x<=N}(d_x - t1) + t1
    small = 0
    block = 64
    x0 = 0
    while x0 <= x_cap:
        xs = np.arange(x0, min(x0 + block, x_cap + 1))
        devs = disk_diag(word, channel, q, xs) - t1
        for dev in devs:
            total += dev
            if abs(dev) < tol * 1e-2:
                small += 1
                if small >= 5:
                    return total
            else:
                small = 0
        x0 += block
    raise RuntimeError("disk trace failed to stabilise")


def pairing(symbol: SymbolElement, kind_plus: str, kind_minus: str,
            q: float, tol: float = 1e-12) -> float:
    """Evaluate (tau_i (x) tau_j) on a symbol (u-channel already dropped)."""

    def functional(kind: str, word: tuple, channel: int) -> float:
        if kind == "tau1":
            return tau1(word)
        return tau0(word, channel, q, tol)

    total = 0.0
    for t in symbol.terms:
        fp = functional(kind_plus, t.plus, +1)
        if fp == 0.0:
            continue
        fm = functional(kind_minus, t.minus, -1)
        total += t.coeff * fp * fm
    return total


# ---------------------------------------------------------------------------
# lifting symbols back to the Hilbert space

def lift_apply(symbol: SymbolElement, v: tuple, q: float) -> dict:
    """Action of the lifted symbol on a basis vector: the product
    representation compressed to the index cone (targets outside give 0)."""
    N, x, y = v
    out: dict = {}
    for t in symbol.terms:
        lvl = N + t.udeg
        if lvl < 0:
            continue
        rp = disk_apply(t.plus, +1, q, x)
        if rp is None:
            continue
        rm = disk_apply(t.minus, -1, q, y)
        if rm is None:
            continue
        xp, cp = rp
        ym, cm = rm
        if xp > lvl or ym > lvl:
            continue
        key = (lvl, xp, ym)
        out[key] = out.get(key, 0.0) + t.coeff * cp * cm
    return out


def default_battery() -> list[tuple]:
    """Words exercising both the balanced sector and the selection rule."""
    gens = {n: AlgebraElement.gen(n) for n in ("a", "a*", "b", "b*")}
    mk = AlgebraElement.from_word
    return [
        ("1", AlgebraElement.one()),
        ("a a*", mk(("a", "a*"))),
        ("a* a", mk(("a*", "a"))),
        ("b b*", mk(("b", "b*"))),
        ("b* b", mk(("b*", "b"))),
        ("a b b* a*", mk(("a", "b", "b*", "a*"))),
        ("b* a* a b", mk(("b*", "a*", "a", "b"))),
        ("a* a b* b", mk(("a*", "a", "b*", "b"))),
        ("a b", gens["a"] * gens["b"]),
        ("b", gens["b"]),
    ]


def theorem4_check(q: float = 0.5, tol: float = 1e-8, words=None) -> dict:
    """Residues through the zeta engine versus the trace functionals of the
    degree-0 symbol: the three full formulas and the two sector formulas.

    The sector formulas are applied with the escaping index on the + leg
    (residue at the second pole pairs tau1 with tau1, at the first pole tau1
    with tau0); the printed variants are inconsistent with the sector trace
    expansion and fail numerically.
    """
    from .zeta import ZetaEngine

    eng = ZetaEngine(q, tol=min(tol * 1e-2, 1e-10))
    items = []
    worst = 0.0
    for label, elem in (words or default_battery()):
        node = from_algebra(elem)
        s0 = rho(elem, q).degree0()
        lhs = {
            "s=3": eng.residue(node, 3),
            "s=2": eng.residue(node, 2),
            "s=1": eng.residue(node, 1),
            "P,s=2": eng.residue(node, 2, "p"),
            "P,s=1": eng.residue(node, 1, "p"),
        }
        rhs = {
            "s=3": pairing(s0, "tau1", "tau1", q),
            "s=2": pairing(s0, "tau1", "tau0", q) + pairing(s0, "tau0", "tau1", q),
            "s=1": pairing(s0, "tau0", "tau0", q),
            "P,s=2": pairing(s0, "tau1", "tau1", q),
            "P,s=1": pairing(s0, "tau1", "tau0", q),
        }
        resid = max(abs(lhs[k] - rhs[k]) for k in lhs)
        worst = max(worst, resid)
        items.append({"word": label, "lhs": lhs, "rhs": rhs, "residual": resid})
    return {"q": q, "tol": tol, "items": items, "max_residual": worst,
            "pass": worst < tol}


def smoothing_check(x: AlgebraElement, q: float, n_max: int = 48,
                    slope_bound: float = -6.0) -> dict:
    """Per-level block norms of (x - lift(rho(x))) with a fitted decay
    exponent; passes when the decay beats the required power law (the true
    decay is geometric)."""
    ev = Evaluator(q, "numeric")
    node = from_algebra(x)
    sym = rho(x, q)
    norms = []
    for n in range(n_max + 1):
        sq = 0.0
        for xx in range(n + 1):
            for yy in range(n + 1):
                v = (n, xx, yy)
                img = ev.apply(node, ev.basis_state(v))
                lft = lift_apply(sym, v, q)
                keys = set(img) | set(lft)
                for k in keys:
                    dv = img.get(k, 0.0) - lft.get(k, 0.0)
                    sq += dv * dv
        norms.append(math.sqrt(sq))
    norms_arr = np.array(norms)
    nz = np.nonzero(norms_arr > 1e-300)[0]
    if len(nz) == 0 or nz[-1] < n_max // 2:
        return {"norms": norms, "slope": None, "identically_zero_tail": True,
                "pass": True}
    top = nz[nz >= max(4, nz[-1] - 12)]
    if len(top) < 3:
        return {"norms": norms, "slope": None, "identically_zero_tail": True,
                "pass": True}
    lx = np.log(top.astype(float))
    ly = np.log(norms_arr[top])
    slope = float(np.polyfit(lx, ly, 1)[0])
    return {"norms": norms, "slope": slope,
            "identically_zero_tail": False, "pass": slope < slope_bound}
