"""Exact scalar arithmetic.

Two kinds of exact scalars are used throughout the package:

* :class:`RationalFunc` -- rational functions of the deformation parameter
  with rational coefficients, stored as dense polynomials.  These carry the
  q-series content (Gaussian binomials, partial-fraction coefficients, the
  rational approximants of the eta logarithmic derivative).

* :class:`SqrtField` / :class:`SqrtElem` -- the representation coefficients
  involve square roots of the quantities ``1 - q^(2m)``.  At a fixed rational
  q these are handled as formal monomials in the symbols
  ``s(m) = sqrt(1 - q^(2m))``; products fold pairs of equal symbols back into
  rationals, so identities whose radicals cancel are decided exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Square root of a nonnegative rational if it is again rational, else None."""
    if x < 0:
        raise ValueError("negative radicand")
    pn, qn = x.numerator, x.denominator
    rn, rq = math.isqrt(pn), math.isqrt(qn)
    if rn * rn == pn and rq * rq == qn:
        return Fraction(rn, rq)
    return None


class Poly:
    """Dense polynomial over Fraction in one variable."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [_as_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    @staticmethod
    def const(x) -> "Poly":
        return Poly([_as_fraction(x)])

    @staticmethod
    def var() -> "Poly":
        return Poly([0, 1])

    @staticmethod
    def monomial(k: int, coeff=1) -> "Poly":
        return Poly([0] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.c) - 1 if self.c else -1

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(tuple(self.c))

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-x for x in self.c])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                if b != 0:
                    out[i + j] += a * b
        return Poly(out)

    def scale(self, k) -> "Poly":
        k = _as_fraction(k)
        return Poly([k * x for x in self.c])

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Poly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        quot = [Fraction(0)] * max(0, len(rem) - len(other.c) + 1)
        dlead = other.c[-1]
        dn = len(other.c)
        for i in range(len(rem) - dn, -1, -1):
            f = rem[i + dn - 1] / dlead
            if f != 0:
                quot[i] = f
                for j, b in enumerate(other.c):
                    rem[i + j] -= f * b
        return Poly(quot), Poly(rem)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.c[-1]
        return Poly([x / lead for x in self.c])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def evaluate(self, x):
        out = 0
        for coeff in reversed(self.c):
            out = out * x + coeff
        return out

    def even_part_decimated(self) -> "Poly":
        """For a polynomial in q with only even exponents, return it as a
        polynomial in q (exponents halved)."""
        for i, coeff in enumerate(self.c):
            if i % 2 == 1 and coeff != 0:
                raise ValueError("polynomial has odd-degree terms")
        return Poly(self.c[::2])

    def compose_square(self) -> "Poly":
        """Substitute q -> q^2."""
        out = [Fraction(0)] * (2 * len(self.c))
        for i, coeff in enumerate(self.c):
            out[2 * i] = coeff
        return Poly(out)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, coeff in enumerate(self.c):
            if coeff == 0:
                continue
            if i == 0:
                parts.append(str(coeff))
            elif i == 1:
                parts.append(f"{coeff}*q")
            else:
                parts.append(f"{coeff}*q^{i}")
        return " + ".join(parts)


class RationalFunc:
    """Reduced rational function num/den over Fraction, den monic and nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduce: bool = True):
        if den is None:
            den = Poly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        lead = den.c[-1]
        if lead != 1:
            num = Poly([x / lead for x in num.c])
            den = Poly([x / lead for x in den.c])
        self.num = num
        self.den = den

    @staticmethod
    def const(x) -> "RationalFunc":
        return RationalFunc(Poly.const(x))

    @staticmethod
    def var() -> "RationalFunc":
        return RationalFunc(Poly.var())

    @staticmethod
    def q_power(k: int) -> "RationalFunc":
        if k >= 0:
            return RationalFunc(Poly.monomial(k))
        return RationalFunc(Poly.const(1), Poly.monomial(-k))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunc):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "RationalFunc") -> "RationalFunc":
        return RationalFunc(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    def __neg__(self) -> "RationalFunc":
        return RationalFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other: "RationalFunc") -> "RationalFunc":
        return self + (-other)

    def __mul__(self, other: "RationalFunc") -> "RationalFunc":
        return RationalFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunc") -> "RationalFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunc(self.num * other.den, self.den * other.num)

    def scale(self, k) -> "RationalFunc":
        return RationalFunc(self.num.scale(k), self.den, reduce=False)

    def __pow__(self, n: int) -> "RationalFunc":
        if n < 0:
            return RationalFunc(self.den ** (-n), self.num ** (-n))
        return RationalFunc(self.num ** n, self.den ** n, reduce=False)

    def evaluate(self, x):
        den = self.den.evaluate(x)
        if den == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num.evaluate(x) / den

    def decimate_even(self) -> "RationalFunc":
        """Rewrite a function of q^2 (only even exponents) in terms of q."""
        return RationalFunc(self.num.even_part_decimated(),
                            self.den.even_part_decimated())

    def substitute_square(self) -> "RationalFunc":
        return RationalFunc(self.num.compose_square(), self.den.compose_square())

    def __repr__(self):
        if self.den == Poly.const(1):
            return repr(self.num)
        return f"({self.num!r}) / ({self.den!r})"


def poly_in_x_eval(coeffs: list[RationalFunc], x: RationalFunc) -> RationalFunc:
    """Horner evaluation of a polynomial in an auxiliary variable whose
    coefficients are rational functions of q."""
    out = RationalFunc.const(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


class SqrtField:
    """Exact scalars at a fixed rational q, extended by sqrt(1 - q^(2m)).

    Elements are finite sums  sum_S  c_S * prod_{m in S} s(m)  with rational
    c_S and S a frozenset of indices m >= 0 whose radicand 1 - q^(2m) is not a
    rational square.  Radicands that are rational squares (notably all of them
    at q = 0, and m = 0 where s(0) = 0) fold into the coefficient.
    """

    def __init__(self, q):
        self.q = _as_fraction(q)
        if not (0 <= self.q < 1):
            raise ValueError("q must lie in [0, 1)")
        self._radicand: dict[int, Fraction] = {}
        self._exact_root: dict[int, Fraction | None] = {}

    def radicand(self, m: int) -> Fraction:
        r = self._radicand.get(m)
        if r is None:
            r = 1 - self.q ** (2 * m)
            self._radicand[m] = r
        return r

    def _root(self, m: int) -> Fraction | None:
        if m not in self._exact_root:
            self._exact_root[m] = exact_sqrt(self.radicand(m))
        return self._exact_root[m]

    def zero(self) -> "SqrtElem":
        return SqrtElem(self, {})

    def one(self) -> "SqrtElem":
        return SqrtElem(self, {frozenset(): Fraction(1)})

    def from_fraction(self, x) -> "SqrtElem":
        x = _as_fraction(x)
        return SqrtElem(self, {frozenset(): x} if x else {})

    def q_pow(self, k: int) -> "SqrtElem":
        if k < 0:
            raise ValueError("negative q power")
        return self.from_fraction(self.q ** k)

    def s(self, m: int) -> "SqrtElem":
        """sqrt(1 - q^(2m)) as a field element."""
        root = self._root(m)
        if root is not None:
            return self.from_fraction(root)
        return SqrtElem(self, {frozenset([m]): Fraction(1)})


class SqrtElem:
    __slots__ = ("field", "parts")

    def __init__(self, field: SqrtField, parts: dict):
        self.field = field
        self.parts = {k: v for k, v in parts.items() if v != 0}

    def is_zero(self) -> bool:
        return not self.parts

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.from_fraction(other)
        out = dict(self.parts)
        for k, v in other.parts.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SqrtElem(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return SqrtElem(self.field, {k: -v for k, v in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SqrtElem(self.field, {k: v * other for k, v in self.parts.items()})
        out: dict = {}
        for ka, va in self.parts.items():
            for kb, vb in other.parts.items():
                coeff = va * vb
                for m in ka & kb:
                    coeff *= self.field.radicand(m)
                key = ka ^ kb
                out[key] = out.get(key, Fraction(0)) + coeff
        return SqrtElem(self.field, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return SqrtElem(self.field, {k: v / other for k, v in self.parts.items()})
        if len(other.parts) != 1:
            raise ValueError("division only by radical monomials")
        (key, val), = other.parts.items()
        inv_coeff = 1 / val
        for m in key:
            inv_coeff /= self.field.radicand(m)
        return self * SqrtElem(self.field, {key: inv_coeff})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_fraction(other)
        return self.parts == other.parts

    def __hash__(self):
        return hash(frozenset(self.parts.items()))

    def evaluate(self) -> float:
        total = 0.0
        for key, val in self.parts.items():
            term = float(val)
            for m in key:
                term *= math.sqrt(float(self.field.radicand(m)))
            total += term
        return total

    def __repr__(self):
        if not self.parts:
            return "0"
        bits = []
        for key, val in sorted(self.parts.items(), key=lambda kv: sorted(kv[0])):
            rad = "*".join(f"s({m})" for m in sorted(key))
            bits.append(f"{val}*{rad}" if rad else str(val))
        return " + ".join(bits)


class FloatField:
    """Float twin of SqrtField, used by the numeric-mode evaluators."""

    def __init__(self, q: float):
        q = float(q)
        if not (0.0 <= q < 1.0):
            raise ValueError("q must lie in [0, 1)")
        self.q = q

    def zero(self) -> float:
        return 0.0

    def one(self) -> float:
        return 1.0

    def from_fraction(self, x) -> float:
        return float(x)

    def q_pow(self, k: int) -> float:
        return self.q ** k

    def s(self, m: int) -> float:
        return math.sqrt(1.0 - self.q ** (2 * m))


def make_field(q, mode: str):
    """Coefficient field for a computation: 'exact' or 'numeric'."""
    if mode == "exact":
        return SqrtField(q)
    if mode == "numeric":
        return FloatField(float(q) if not isinstance(q, str) else float(Fraction(q)))
    raise ValueError(f"unknown mode {mode!r}")
