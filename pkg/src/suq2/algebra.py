"""Words and linear combinations in the generators of C(SU_q(2)).

Elements are finite sums of words over the alphabet {a, a*, b, b*}; products
are plain word concatenation (no rewriting to a normal form -- everything
downstream is evaluated through representations, where the defining relations
hold automatically and are verified by :func:`suq2.rep.check_relations`).
"""

from __future__ import annotations

from fractions import Fraction

LETTERS = ("a", "a*", "b", "b*")

_STAR = {"a": "a*", "a*": "a", "b": "b*", "b*": "b"}

# (alpha-degree, beta-degree) per letter; adjoints contribute the negatives.
_BIDEG = {"a": (1, 0), "a*": (-1, 0), "b": (0, 1), "b*": (0, -1)}

Word = tuple  # tuple of letters


def word_adjoint(w: Word) -> Word:
    return tuple(_STAR[x] for x in reversed(w))


def word_bidegree(w: Word) -> tuple[int, int]:
    da = db = 0
    for x in w:
        p, r = _BIDEG[x]
        da += p
        db += r
    return da, db


def word_del_degree(w: Word) -> int:
    """Degree for the derivation rotating the generators in opposite ways:
    beta-degree minus alpha-degree."""
    da, db = word_bidegree(w)
    return db - da


class AlgebraElement:
    """Finite linear combination of words; coefficients are Fractions (or
    floats, once a numeric computation has touched them)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        if terms:
            for w, c in terms.items():
                if c != 0:
                    self.terms[tuple(w)] = c

    @staticmethod
    def zero() -> "AlgebraElement":
        return AlgebraElement()

    @staticmethod
    def one() -> "AlgebraElement":
        return AlgebraElement({(): Fraction(1)})

    @staticmethod
    def gen(letter: str) -> "AlgebraElement":
        if letter not in LETTERS:
            raise ValueError(f"unknown generator {letter!r}")
        return AlgebraElement({(letter,): Fraction(1)})

    @staticmethod
    def from_word(w, coeff=Fraction(1)) -> "AlgebraElement":
        return AlgebraElement({tuple(w): coeff})

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return AlgebraElement(out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    out[w] = out.get(w, 0) + c1 * c2
            return AlgebraElement(out)
        return self.scale(other)

    def __rmul__(self, other) -> "AlgebraElement":
        return self.scale(other)

    def scale(self, k) -> "AlgebraElement":
        if k == 0:
            return AlgebraElement()
        return AlgebraElement({w: k * c for w, c in self.terms.items()})

    def __pow__(self, n: int) -> "AlgebraElement":
        if n < 0:
            raise ValueError("negative powers are not in the algebra")
        out = AlgebraElement.one()
        for _ in range(n):
            out = out * self
        return out

    def adjoint(self) -> "AlgebraElement":
        out: dict = {}
        for w, c in self.terms.items():
            wa = word_adjoint(w)
            # coefficients are real throughout this artifact
            out[wa] = out.get(wa, 0) + c
        return AlgebraElement(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.terms.values())

    def del_component(self, d: int) -> "AlgebraElement":
        """Terms of the given degree for the derivation d_beta - d_alpha."""
        return AlgebraElement(
            {w: c for w, c in self.terms.items() if word_del_degree(w) == d})

    def del_derivative(self) -> "AlgebraElement":
        """Apply the derivation itself: each word is scaled by its degree."""
        return AlgebraElement(
            {w: word_del_degree(w) * c for w, c in self.terms.items()})

    def sigma(self) -> "LaurentPoly":
        """Homomorphism onto the circle: a -> u, b -> 0."""
        coeffs: dict = {}
        for w, c in self.terms.items():
            da, db = word_bidegree(w)
            if any(x in ("b", "b*") for x in w):
                continue
            coeffs[da] = coeffs.get(da, 0) + c
        return LaurentPoly(coeffs)

    def words(self):
        return list(self.terms)

    def to_source(self) -> str:
        """Deterministic textual form accepted by the parser."""
        if not self.terms:
            return "0"
        chunks = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            neg = c < 0
            mag = -c if neg else c
            body = " ".join(w) if w else "1"
            if mag == 1 and w:
                text = body
            else:
                if isinstance(mag, Fraction):
                    coeff = (f"{mag.numerator}/{mag.denominator}"
                             if mag.denominator != 1 else str(mag.numerator))
                else:
                    coeff = str(mag)
                text = f"{coeff} {body}" if w else coeff
            chunks.append(("-" if neg else "+", text))
        sign0, text0 = chunks[0]
        out = ("- " if sign0 == "-" else "") + text0
        for sign, text in chunks[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"AlgebraElement({self.to_source()})"


class LaurentPoly:
    """Finite Laurent polynomial in the circle generator u."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {int(n): c for n, c in (coeffs or {}).items() if c != 0}

    def fourier(self, n: int):
        return self.coeffs.get(n, 0)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, 0) + c
        return LaurentPoly(out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict = {}
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                out[n1 + n2] = out.get(n1 + n2, 0) + c1 * c2
        return LaurentPoly(out)

    def derivative(self) -> "LaurentPoly":
        """d/dtheta; u^n goes to (i n) u^n."""
        return LaurentPoly({n: complex(0, n) * c for n, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.fourier(n) == other.fourier(n) for n in keys)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*u^{n}" for n, c in sorted(self.coeffs.items()))


def circle_pairing(f: LaurentPoly, g: LaurentPoly, weight) -> complex:
    """(1/2pi) integral of f * W(g) dtheta, where W multiplies the Fourier
    mode u^m of g by weight(m).  Returns sum_m f_{-m} weight(m) g_m."""
    total = 0
    for m, gm in g.coeffs.items():
        fm = f.fourier(-m)
        if fm:
            total += fm * weight(m) * gm
    return total


# Named monomials alpha^{*k} beta^n alpha^l; beta^0 stands for the support
# projection e = b* b and beta^{-n} for (b*)^n.
def monomial(k: int, n: int, ell: int) -> AlgebraElement:
    mid: tuple
    if n > 0:
        mid = ("b",) * n
    elif n < 0:
        mid = ("b*",) * (-n)
    else:
        mid = ("b*", "b")
    return AlgebraElement.from_word(("a*",) * k + mid + ("a",) * ell)


def alpha_power(k: int) -> AlgebraElement:
    """a^k for k > 0, (a*)^(-k) for k < 0, 1 for k = 0."""
    if k >= 0:
        return AlgebraElement.from_word(("a",) * k)
    return AlgebraElement.from_word(("a*",) * (-k))
