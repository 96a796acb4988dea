"""Exact q-series arithmetic: Gaussian binomials, the partial-fraction data
behind the rational approximants of the eta logarithmic derivative, and the
approximants themselves.

Everything here is exact rational-function arithmetic in the deformation
parameter; the only floating-point object is the numerically summed Lambert
series G."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import Poly, RationalFunc, poly_in_x_eval

RF = RationalFunc


def _one_minus_q(exp: int) -> RF:
    """1 - q^exp."""
    return RF.const(1) - RF.q_power(exp)


def qbinom(r: int, k: int) -> RF:
    """Gaussian binomial coefficient with parameter q^2 (product formula);
    always a polynomial in q^2."""
    if not 0 <= k <= r:
        raise ValueError("need 0 <= k <= r")
    out = RF.const(1)
    for i in range(1, k + 1):
        out = out * _one_minus_q(2 * (r - k + i)) / _one_minus_q(2 * i)
    if out.den.degree > 0:
        raise AssertionError("Gaussian binomial failed to reduce to a polynomial")
    return out


def qbinom_recursive(r: int, k: int) -> RF:
    """Same coefficient through the deformed Pascal recursion; kept as an
    independent oracle for the product formula."""
    if not 0 <= k <= r:
        raise ValueError("need 0 <= k <= r")
    row = [RF.const(1)]
    for n in range(1, r + 1):
        nxt = [RF.const(1)]
        for j in range(1, n):
            nxt.append(row[j - 1] + RF.q_power(2 * j) * row[j])
        nxt.append(RF.const(1))
        row = nxt
    return row[k]


def rho_factorial(m: int) -> RF:
    """prod_{a=1}^{m} (q^{2a} - 1)."""
    out = RF.const(1)
    for a in range(1, m + 1):
        out = out * (RF.q_power(2 * a) - RF.const(1))
    return out


def lambda_coeffs(r: int) -> list[RF]:
    """Partial-fraction coefficients of the constant-term generating
    fraction: R(1/z) = sum_l lambda_l / (z - q^(4+2l))."""
    if r < 1:
        raise ValueError("r >= 1")
    rho = rho_factorial(r - 1)
    out = []
    for j in range(r):
        expo = 4 + j * j + j * (3 - 2 * r) - 3 * r + r * r
        lam = RF.q_power(expo).scale(-((-1) ** j)) * qbinom(r - 1, j) / rho
        out.append(lam)
    return out


def lambda_sum_identity(r: int) -> bool:
    """sum_l lambda_l q^(-4-2l) = -q^(-2r), exactly."""
    total = RF.const(0)
    for l, lam in enumerate(lambda_coeffs(r)):
        total = total + lam * RF.q_power(-4 - 2 * l)
    return total == RF.q_power(-2 * r).scale(-1)


def _poly_x_mul(a: list[RF], b: list[RF]) -> list[RF]:
    out = [RF.const(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def recombination_identity(r: int) -> bool:
    """The partial fractions recombine to the product formula
    R(x) = prod_l (-q^(2+2l) x) / (1 - q^(4+2l) x), as exact rational
    functions: both sides are compared after clearing denominators."""
    lam = lambda_coeffs(r)
    # lhs: prod(-q^{2+2l}) x^r
    lead = RF.const(1)
    for l in range(r):
        lead = lead * RF.q_power(2 + 2 * l).scale(-1)
    lhs = [RF.const(0)] * r + [lead]
    # rhs: sum_l lam_l x prod_{l' != l} (1 - q^{4+2l'} x)
    rhs = [RF.const(0)] * (r + 1)
    for l in range(r):
        term = [RF.const(0), lam[l]]
        for lp in range(r):
            if lp != l:
                term = _poly_x_mul(term, [RF.const(1), RF.q_power(4 + 2 * lp).scale(-1)])
        for i, t in enumerate(term):
            rhs[i] = rhs[i] + t
    return all(a == b for a, b in zip(lhs, rhs))


def c0(r: int) -> RF:
    """Coefficient of the divisor-sum series produced by the constant terms."""
    rho = rho_factorial(r - 1)
    total = RF.const(0)
    for j in range(r):
        expo = j * j + j - 2 * r * j - 3 * r + r * r
        total = total + RF.q_power(expo).scale(((-1) ** j) * (j + 1)) * qbinom(r - 1, j)
    return total / rho


def _numerator_coeffs(r: int) -> list[RF]:
    """Coefficients in x of the non-constant-term generating numerator:
    sum_{k<r} (-1)^k q^(k(k+1)) binom(r,k)_{q^2} (x^k - x^r q^(2(r-k)))
    / (1 - q^(2(r-k)))."""
    coeffs = [RF.const(0)] * (r + 1)
    for k in range(r):
        pref = RF.q_power(k * (k + 1)).scale((-1) ** k) * qbinom(r, k)
        denom = _one_minus_q(2 * (r - k))
        coeffs[k] = coeffs[k] + pref / denom
        coeffs[r] = coeffs[r] - pref * RF.q_power(2 * (r - k)) / denom
    return coeffs


def mu_coeffs(r: int) -> list[RF]:
    """Residue coefficients mu_l of the non-constant part in the expansion
    Q(x) = mu + sum_l mu_l / (1 - x q^(4+2l))."""
    num = _numerator_coeffs(r)
    out = []
    for l in range(r):
        x0 = RF.q_power(-4 - 2 * l)
        val = poly_in_x_eval(num, x0)
        for lp in range(r):
            if lp != l:
                val = val / (RF.const(1) - RF.q_power(2 * (lp - l)))
        out.append(val)
    return out


def c1(r: int) -> RF:
    """Divisor-series coefficient of the non-constant terms (printed form)."""
    total = _one_minus_q(2 * r) ** (-1)
    inner = RF.const(0)
    for k in range(r):
        inner = inner + (qbinom(r, k) * RF.q_power(k * (k - 1)).scale((-1) ** k)
                         / _one_minus_q(2 * (r - k)))
    return total + RF.q_power(-r * (r + 1)).scale((-1) ** r) * inner


def fundamental_cancellation(r: int) -> bool:
    """c0 + c1 = 0, exactly."""
    return (c0(r) + c1(r)).is_zero()


def _lambert_partial(upto: int) -> list[RF]:
    """q^{2m}/(1-q^{2m}) for m = 1..upto, as exact rational functions."""
    return [RF.q_power(2 * m) / _one_minus_q(2 * m) for m in range(1, upto + 1)]


def R(r: int) -> RF:
    """The rational approximant whose combination with the Lambert series
    gives the regularised sector trace of (b*b)^r: assembled from the
    partial-fraction bookkeeping, in the printed variable (the theorem
    statement evaluates it at q^2)."""
    if r < 1:
        raise ValueError("r >= 1")
    lam = lambda_coeffs(r)
    mus = mu_coeffs(r)
    # internal consistency of the two divisor-series coefficients
    mu_total = RF.const(0)
    for m in mus:
        mu_total = mu_total + m
    if not (mu_total == c1(r)):
        raise AssertionError("sum of residues disagrees with the printed c1")
    if not fundamental_cancellation(r):
        raise AssertionError("c0 + c1 != 0")
    lamb = _lambert_partial(r + 1)

    def lambert(m: int) -> RF:
        return lamb[m - 1]

    total = RF.const(0)
    # constant terms: sum_l lam_l q^{-4-2l} E_l, E_l = sum_{m<=l}(l+1-m) L_m
    for l in range(r):
        e_l = RF.const(0)
        for m in range(1, l + 1):
            e_l = e_l + lambert(m).scale(l + 1 - m)
        total = total + lam[l] * RF.q_power(-4 - 2 * l) * e_l
    # non-constant terms: Q(0)/2 - sum_l mu_l F_l, F_l = sum_{m<=l+1} L_m
    q0 = _one_minus_q(2 * r) ** (-1)
    total = total + q0.scale(Fraction(1, 2))
    for l in range(r):
        f_l = RF.const(0)
        for m in range(1, l + 2):
            f_l = f_l + lambert(m)
        total = total - mus[l] * f_l
    rr = RF.q_power(2 * r - 2) * total
    return rr.decimate_even()


def poles_only_at_roots_of_unity(f: RF, max_order: int | None = None) -> bool:
    """Every irreducible factor of the denominator divides some q^m - 1:
    repeatedly strip common factors with q^m - 1 and check nothing is left."""
    den = f.den
    if den.degree <= 0:
        return True
    cap = max_order or (den.degree + 1)
    for m in range(1, cap + 1):
        cyc = Poly([-1] + [0] * (m - 1) + [1])  # q^m - 1
        while True:
            g = den.gcd(cyc)
            if g.degree <= 0:
                break
            den = den.divmod(g)[0]
            if den.degree <= 0:
                return True
    return den.degree <= 0


def printed_approximants() -> dict[int, RF]:
    """The four closed-form fractions used as oracles in the tests."""
    q = Poly.var()
    one = Poly.const(1)

    def rf(num: Poly, den: Poly) -> RF:
        return RationalFunc(num, den)

    r1 = rf(Poly.const(3), (one - q).scale(2))
    r2 = rf(Poly([2, 5, -3]), ((q - one) ** 2 * (one + q)).scale(2))
    r3 = rf(Poly([2, 8, 13, 11, -1, -3]),
            (((q * q) - one) ** 2 * Poly([1, 1, 1])).scale(2))
    r4 = rf(Poly([2, 10, 24, 43, 50, 46, 24, 4, -4, -3]),
            ((one + q * q) * (Poly([-1, -1, 0, 1, 1]) ** 2)).scale(2))
    return {1: r1, 2: r2, 3: r3, 4: r4}


# ---------------------------------------------------------------------------
# the Lambert series G and the eta-function identity

@dataclass
class QSeriesValue:
    value: float
    tail_bound: float
    terms_used: int


def G(qsq: float, tol: float = 1e-12) -> QSeriesValue:
    """G(Q) = sum_{n>=1} n Q^n / (1 - Q^n) for Q = q^2 in (0, 1), truncated
    with a certified geometric tail bound <= tol."""
    if not 0.0 <= qsq < 1.0:
        raise ValueError("the series converges only for 0 <= q^2 < 1")
    if qsq == 0.0:
        return QSeriesValue(0.0, 0.0, 0)
    total = 0.0
    n = 0
    while True:
        n += 1
        total += n * qsq ** n / (1.0 - qsq ** n)
        tail = (qsq ** (n + 1) * ((n + 1) * (1.0 - qsq) + qsq)
                / (1.0 - qsq) ** 3)
        if tail < tol:
            return QSeriesValue(total, tail, n)
        if n > 100000:
            raise RuntimeError("Lambert series failed to converge")


def log_eta(qsq: float, tol: float = 1e-15) -> float:
    """log of Q^(1/24) prod (1 - Q^n) at Q = q^2."""
    if not 0.0 < qsq < 1.0:
        raise ValueError("need 0 < q^2 < 1")
    total = math.log(qsq) / 24.0
    n = 0
    while True:
        n += 1
        total += math.log1p(-qsq ** n)
        if qsq ** (n + 1) / (1.0 - qsq) < tol:
            return total


def eta_identity_defect(qsq: float, tol: float = 1e-12) -> dict:
    """Term-wise differentiation gives Q dlog(eta)/dQ = 1/24 - G(Q); the
    left side is evaluated here by an independent numerical derivative."""
    h = qsq * 1e-6
    lhs = qsq * (log_eta(qsq + h) - log_eta(qsq - h)) / (2 * h)
    rhs = 1.0 / 24.0 - G(qsq, tol).value
    return {"qsq": qsq, "lhs": lhs, "rhs": rhs, "defect": abs(lhs - rhs)}
