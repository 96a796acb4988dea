"""Action of the algebra and of the geometric operators on the Hilbert space.

Basis vectors are labelled (N, x, y) with 0 <= x, y <= N: N is the level (the
|D| eigenvalue), and (x, y) index the spin-N/2 block.  Generators act through
the four homogeneous pieces below; each raises or lowers the level by one, so
operators are applied to basis vectors lazily and exactly, never materialised
as truncated matrices.

    a+ : (N,x,y) -> (N+1,x,y)      q^(x+y+1) s(N-y+1)s(N-x+1) / (s(N+1)s(N+2))
    a- : (N,x,y) -> (N-1,x-1,y-1)  s(y)s(x) / (s(N)s(N+1))
    b+ : (N,x,y) -> (N+1,x+1,y)    -q^y s(N-y+1)s(x+1) / (s(N+1)s(N+2))
    b- : (N,x,y) -> (N-1,x,y-1)    q^x s(y)s(N-x) / (s(N)s(N+1))

with s(m) = sqrt(1 - q^(2m)); a branch vanishes whenever an s(0) factor
appears or the target leaves the index cone.  D has eigenvalue +N on the
sector {x = N} and -N elsewhere; F = sign(D), P = (1+F)/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement
from .scalars import make_field

BasisVector = tuple  # (N, x, y)
VACUUM: BasisVector = (0, 0, 0)


# ---------------------------------------------------------------------------
# operator expression nodes (hashable, used as cache keys downstream)

@dataclass(frozen=True)
class OpWord:
    """Product of generator letters, leftmost applied last.

    A letter may carry a branch suffix: 'a+' is the level-raising piece of
    'a', 'a*-' the level-lowering piece of 'a*', and so on.
    """
    letters: tuple


@dataclass(frozen=True)
class OpF:
    pass


@dataclass(frozen=True)
class OpP:
    pass


@dataclass(frozen=True)
class OpAbsD:
    """|D|^z, with |D| replaced by epsilon on the level-0 kernel."""
    z: object


@dataclass(frozen=True)
class OpScaled:
    coeff: object
    op: object


@dataclass(frozen=True)
class OpSum:
    terms: tuple


@dataclass(frozen=True)
class OpProd:
    factors: tuple  # applied right to left


@dataclass(frozen=True)
class OpDelta:
    """delta(T) = [|D|, T] (true |D|: eigenvalue 0 on the kernel)."""
    op: object


@dataclass(frozen=True)
class OpNabla:
    """nabla(T) = [D^2, T]."""
    op: object


@dataclass(frozen=True)
class OpCommD:
    """[D, T]."""
    op: object


@dataclass(frozen=True)
class OpEquiv:
    """Generator of the quantum enveloping algebra: 'k' (any integer power),
    'e' or 'f'.  Numeric mode only (coefficients involve q^(1/2))."""
    gen: str
    power: int = 1


IDENTITY = OpWord(())


def from_algebra(x: AlgebraElement):
    terms = []
    for w, c in sorted(x.terms.items(), key=lambda t: (len(t[0]), t[0])):
        node = OpWord(w)
        terms.append(node if c == 1 else OpScaled(c, node))
    if not terms:
        return OpScaled(0, IDENTITY)
    if len(terms) == 1:
        return terms[0]
    return OpSum(tuple(terms))


def nabla_count(op) -> int:
    """Number of nested nabla applications; bounds the polynomial degree
    gained by the level traces."""
    if isinstance(op, OpNabla):
        return 1 + nabla_count(op.op)
    if isinstance(op, (OpDelta, OpCommD)):
        return nabla_count(op.op)
    if isinstance(op, OpScaled):
        return nabla_count(op.op)
    if isinstance(op, OpSum):
        return max((nabla_count(t) for t in op.terms), default=0)
    if isinstance(op, OpProd):
        return sum(nabla_count(f) for f in op.factors)
    return 0


# ---------------------------------------------------------------------------
# generator branches

def _branch_a_up(field, N, x, y):
    return (N + 1, x, y), (field.q_pow(x + y + 1) * field.s(N - y + 1) *
                           field.s(N - x + 1) / (field.s(N + 1) * field.s(N + 2)))


def _branch_a_down(field, N, x, y):
    return (N - 1, x - 1, y - 1), (field.s(y) * field.s(x) /
                                   (field.s(N) * field.s(N + 1)))


def _branch_b_up(field, N, x, y):
    return (N + 1, x + 1, y), -(field.q_pow(y) * field.s(N - y + 1) *
                                field.s(x + 1) / (field.s(N + 1) * field.s(N + 2)))


def _branch_b_down(field, N, x, y):
    return (N - 1, x, y - 1), (field.q_pow(x) * field.s(y) * field.s(N - x) /
                               (field.s(N) * field.s(N + 1)))


def apply_letter(letter: str, v: BasisVector, field):
    """Image of a basis vector under a single (possibly branch-restricted)
    generator letter, as a list of (target, coefficient)."""
    N, x, y = v
    star = "*" in letter
    base = letter[0] + ("*" if star else "")
    branch = letter[len(base):]  # '', '+', or '-'
    out = []
    if base == "a":
        if branch in ("", "+"):
            out.append(_branch_a_up(field, N, x, y))
        if branch in ("", "-") and N >= 1 and x >= 1 and y >= 1:
            out.append(_branch_a_down(field, N, x, y))
    elif base == "a*":
        if branch in ("", "+"):
            tgt = (N + 1, x + 1, y + 1)
            _, c = _branch_a_down(field, N + 1, x + 1, y + 1)
            out.append((tgt, c))
        if branch in ("", "-") and N >= 1 and x <= N - 1 and y <= N - 1:
            tgt = (N - 1, x, y)
            _, c = _branch_a_up(field, N - 1, x, y)
            out.append((tgt, c))
    elif base == "b":
        if branch in ("", "+"):
            out.append(_branch_b_up(field, N, x, y))
        if branch in ("", "-") and N >= 1 and y >= 1 and x <= N - 1:
            out.append(_branch_b_down(field, N, x, y))
    elif base == "b*":
        if branch in ("", "+"):
            tgt = (N + 1, x, y + 1)
            _, c = _branch_b_down(field, N + 1, x, y + 1)
            out.append((tgt, c))
        if branch in ("", "-") and N >= 1 and x >= 1 and y <= N - 1:
            tgt = (N - 1, x - 1, y)
            _, c = _branch_b_up(field, N - 1, x - 1, y)
            out.append((tgt, c))
    else:
        raise ValueError(f"unknown letter {letter!r}")
    return out


def apply_generator(letter: str, v: BasisVector, q, mode: str = "numeric"):
    """Public single-letter action; returns a StateVector (no zero terms)."""
    field = make_field(q, mode)
    out: dict = {}
    for tgt, c in apply_letter(letter, v, field):
        if not _is_zero_coeff(c):
            _accumulate(out, tgt, c)
    return out


# ---------------------------------------------------------------------------
# state evaluation

def _accumulate(state: dict, v: BasisVector, c):
    cur = state.get(v)
    state[v] = c if cur is None else cur + c


def _is_zero_coeff(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


def _d_eigen(v: BasisVector):
    N, x, _ = v
    return N if x == N else -N


def _abs_d_pow(level: int, z, eps):
    if level == 0:
        base = eps
    else:
        base = level
    if isinstance(z, int) or (isinstance(z, Fraction) and z.denominator == 1):
        return Fraction(base) ** int(z) if isinstance(base, (int, Fraction)) else float(base) ** int(z)
    return float(base) ** float(z)


class Evaluator:
    """Per-basis-vector evaluator; exact when mode='exact' and q rational."""

    def __init__(self, q, mode: str = "numeric", eps=1):
        self.mode = mode
        self.field = make_field(q, mode)
        self.q = self.field.q
        self.eps = Fraction(eps) if mode == "exact" else float(eps)

    def zero_state(self) -> dict:
        return {}

    def basis_state(self, v: BasisVector, coeff=1) -> dict:
        c = (self.field.from_fraction(coeff) if isinstance(coeff, (int, Fraction))
             else coeff)
        return {v: c}

    def scalar(self, c):
        if isinstance(c, (int, Fraction)):
            return self.field.from_fraction(c)
        if self.mode == "exact":
            raise TypeError("exact mode requires rational scalars")
        return c

    def apply(self, op, state: dict) -> dict:
        if isinstance(op, OpWord):
            out = state
            for letter in reversed(op.letters):
                nxt: dict = {}
                for v, c in out.items():
                    for tgt, lc in apply_letter(letter, v, self.field):
                        _accumulate(nxt, tgt, lc * c)
                out = nxt
            return dict(out) if out is state else out
        if isinstance(op, OpF):
            return {v: (c if v[1] == v[0] else -c) for v, c in state.items()}
        if isinstance(op, OpP):
            return {v: c for v, c in state.items() if v[1] == v[0]}
        if isinstance(op, OpAbsD):
            out = {}
            for v, c in state.items():
                w = _abs_d_pow(v[0], op.z, self.eps)
                out[v] = c * (self.field.from_fraction(w) if isinstance(w, Fraction) else w)
            return out
        if isinstance(op, OpScaled):
            k = self.scalar(op.coeff)
            inner = self.apply(op.op, state)
            return {v: k * c for v, c in inner.items()}
        if isinstance(op, OpSum):
            out: dict = {}
            for t in op.terms:
                for v, c in self.apply(t, state).items():
                    _accumulate(out, v, c)
            return out
        if isinstance(op, OpProd):
            out = state
            for f in reversed(op.factors):
                out = self.apply(f, out)
            return out
        if isinstance(op, OpDelta):
            tv = self.apply(op.op, state)
            lhs = {v: c * self.field.from_fraction(v[0]) for v, c in tv.items()}
            dv = {v: c * self.field.from_fraction(v[0]) for v, c in state.items()}
            rhs = self.apply(op.op, dv)
            return self._sub(lhs, rhs)
        if isinstance(op, OpNabla):
            tv = self.apply(op.op, state)
            lhs = {v: c * self.field.from_fraction(v[0] ** 2) for v, c in tv.items()}
            dv = {v: c * self.field.from_fraction(v[0] ** 2) for v, c in state.items()}
            rhs = self.apply(op.op, dv)
            return self._sub(lhs, rhs)
        if isinstance(op, OpCommD):
            tv = self.apply(op.op, state)
            lhs = {v: c * self.field.from_fraction(_d_eigen(v)) for v, c in tv.items()}
            dv = {v: c * self.field.from_fraction(_d_eigen(v)) for v, c in state.items()}
            rhs = self.apply(op.op, dv)
            return self._sub(lhs, rhs)
        if isinstance(op, OpEquiv):
            return self._apply_equiv(op, state)
        if isinstance(op, AlgebraElement):
            return self.apply(from_algebra(op), state)
        raise TypeError(f"unsupported node {type(op).__name__}")

    def _sub(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for v, c in b.items():
            _accumulate(out, v, -c)
        return out

    def _apply_equiv(self, op: OpEquiv, state: dict) -> dict:
        if self.mode != "numeric":
            raise ValueError("equivariance generators are numeric-mode only")
        q = self.q
        if op.gen == "k":
            return {v: c * q ** (op.power * (v[2] - v[0] / 2.0))
                    for v, c in state.items()}
        if op.power != 1:
            raise ValueError("only k admits arbitrary powers")
        out: dict = {}
        for (N, x, y), c in state.items():
            if op.gen == "e":
                if y + 1 <= N:
                    coeff = (q ** ((1 - N) / 2.0)
                             * math.sqrt((1 - q ** (2 * (y + 1))) * (1 - q ** (2 * (N - y))))
                             / (1 - q * q))
                    _accumulate(out, (N, x, y + 1), c * coeff)
            elif op.gen == "f":
                if y - 1 >= 0:
                    coeff = (q ** ((1 - N) / 2.0)
                             * math.sqrt((1 - q ** (2 * y)) * (1 - q ** (2 * (N - y + 1))))
                             / (1 - q * q))
                    _accumulate(out, (N, x, y - 1), c * coeff)
            else:
                raise ValueError(f"unknown generator {op.gen!r}")
        return out

    def matrix_element(self, op, v: BasisVector, w: BasisVector):
        """<op v, w> in the orthonormal basis."""
        img = self.apply(op, self.basis_state(v))
        return img.get(w, self.field.from_fraction(0))

    def coeff_abs(self, c) -> float:
        return abs(c.evaluate()) if hasattr(c, "evaluate") else abs(c)


def basis_iter(n_max: int):
    for N in range(n_max + 1):
        for x in range(N + 1):
            for y in range(N + 1):
                yield (N, x, y)


def state_max_abs(state: dict, ev: Evaluator) -> float:
    return max((ev.coeff_abs(c) for c in state.values()), default=0.0)


# ---------------------------------------------------------------------------
# defining relations

def relation_elements(q) -> dict:
    """The five defining relations as elements that must annihilate every
    basis vector.  q is a Fraction (exact) or float (numeric)."""
    a, astar = AlgebraElement.gen("a"), AlgebraElement.gen("a*")
    b, bstar = AlgebraElement.gen("b"), AlgebraElement.gen("b*")
    one = AlgebraElement.one()
    return {
        "a*a + b*b = 1": astar * a + bstar * b - one,
        "aa* + q^2 bb* = 1": a * astar + (b * bstar).scale(q * q) - one,
        "ab = q ba": a * b - (b * a).scale(q),
        "ab* = q b*a": a * bstar - (bstar * a).scale(q),
        "bb* = b*b": b * bstar - bstar * b,
    }


def check_relations(q, n_max: int, mode: str = "numeric") -> dict:
    """Evaluate all defining relations on every basis vector with level <=
    n_max; returns per-relation max residuals (exactly zero in exact mode)."""
    ev = Evaluator(q, mode)
    rels = relation_elements(ev.q if mode == "numeric" else Fraction(q))
    residuals = {}
    exact_zero = True
    for name, elem in rels.items():
        op = from_algebra(elem)
        worst = 0.0
        for v in basis_iter(n_max):
            img = ev.apply(op, ev.basis_state(v))
            for c in img.values():
                if mode == "exact" and not _is_zero_coeff(c):
                    exact_zero = False
                worst = max(worst, ev.coeff_abs(c))
        residuals[name] = worst
    return {
        "mode": mode,
        "n_max": n_max,
        "q": str(q),
        "residuals": residuals,
        "max_residual": max(residuals.values()),
        "exact_zero": exact_zero if mode == "exact" else None,
    }


# ---------------------------------------------------------------------------
# torus bigrading

def torus_phase(u: float, v: float, vec: BasisVector) -> complex:
    """Eigenvalue of the diagonal two-torus action on a basis vector."""
    N, x, y = vec
    ksum = x + y - N   # k + l of the original half-integer labels
    kdif = x - y       # k - l
    return cmath.exp(1j * (-u * ksum + v * kdif))


# ---------------------------------------------------------------------------
# equivariance (section on quantum group symmetry)

def hopf_action(gen: str, op, q: float) -> object:
    """Composite operator realising the enveloping-algebra action on an
    operator: k(P) = k P k^-1, e(P) = e P k^-1 - q k^-1 P e, f(P) = f P k^-1
    - q^-1 k^-1 P f."""
    k_inv = OpEquiv("k", -1)
    if gen == "k":
        return OpProd((OpEquiv("k", 1), op, k_inv))
    if gen == "e":
        return OpSum((OpProd((OpEquiv("e"), op, k_inv)),
                      OpScaled(-q, OpProd((k_inv, op, OpEquiv("e"))))))
    if gen == "f":
        return OpSum((OpProd((OpEquiv("f"), op, k_inv)),
                      OpScaled(-1.0 / q, OpProd((k_inv, op, OpEquiv("f"))))))
    raise ValueError(f"unknown generator {gen!r}")


def check_equivariance(q: float, n_max: int = 10) -> dict:
    """Relations of the enveloping algebra and commutation with D on all
    basis vectors with level <= n_max."""
    if not (0 < q < 1):
        raise ValueError("equivariance checks need 0 < q < 1")
    ev = Evaluator(q, "numeric")
    k, e, f = OpEquiv("k"), OpEquiv("e"), OpEquiv("f")
    k2, km2 = OpEquiv("k", 2), OpEquiv("k", -2)
    scale = 1.0 / (q - 1.0 / q)
    checks = {
        "ke = q ek": OpSum((OpProd((k, e)), OpScaled(-q, OpProd((e, k))))),
        "kf = q^-1 fk": OpSum((OpProd((k, f)), OpScaled(-1.0 / q, OpProd((f, k))))),
        "[e,f] = (k^2-k^-2)/(q-q^-1)": OpSum((
            OpProd((e, f)), OpScaled(-1, OpProd((f, e))),
            OpScaled(-scale, k2), OpScaled(scale, km2))),
        "[D,k] = 0": OpCommD(k),
        "[D,e] = 0": OpCommD(e),
        "[D,f] = 0": OpCommD(f),
    }
    residuals = {}
    for name, op in checks.items():
        worst = 0.0
        for v in basis_iter(n_max):
            img = ev.apply(op, ev.basis_state(v))
            worst = max(worst, state_max_abs(img, ev))
        residuals[name] = worst
    return {"q": q, "n_max": n_max, "residuals": residuals,
            "max_residual": max(residuals.values())}


def vacuum_hopf_check(q: float) -> dict:
    """The coordinate action read off on the cyclic vector: h(x) applied to
    the vacuum must agree with the operator h acting on x(vacuum).

    On generators: k(a) = q^-1/2 a, k(b) = q^-1/2 b, e(a) = q b*,
    e(b) = -a*, e(a*) = 0, e(b*) = 0.  (The adjoint generator appears in
    e(b); the coproduct-consistency check in the tests pins this down.)
    """
    if not (0 < q < 1):
        raise ValueError("vacuum checks need 0 < q < 1")
    ev = Evaluator(q, "numeric")
    sq = math.sqrt(q)
    cases = {
        "k(a) = q^-1/2 a": ("k", AlgebraElement.gen("a"),
                            AlgebraElement.gen("a").scale(1.0 / sq)),
        "k(b) = q^-1/2 b": ("k", AlgebraElement.gen("b"),
                            AlgebraElement.gen("b").scale(1.0 / sq)),
        "e(a) = q b*": ("e", AlgebraElement.gen("a"),
                        AlgebraElement.gen("b*").scale(q)),
        "e(b) = -a*": ("e", AlgebraElement.gen("b"),
                       AlgebraElement.gen("a*").scale(-1)),
        "e(a*) = 0": ("e", AlgebraElement.gen("a*"), AlgebraElement.zero()),
        "e(b*) = 0": ("e", AlgebraElement.gen("b*"), AlgebraElement.zero()),
    }
    residuals = {}
    vac = ev.basis_state(VACUUM)
    for name, (gen, x, target) in cases.items():
        lhs = ev.apply(hopf_action(gen, from_algebra(x), q), vac)
        rhs = ev.apply(from_algebra(target), vac)
        residuals[name] = state_max_abs(ev._sub(lhs, rhs), ev)
    return {"q": q, "residuals": residuals,
            "max_residual": max(residuals.values())}
