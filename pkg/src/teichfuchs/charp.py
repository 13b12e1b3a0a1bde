"""Reduction mod p^n: expansion coefficients, Cartier patterns, p-curvature.

Polynomials over ``O_D/p^n`` are stored as two integer lists ``(c0, c1)``
meaning ``c0 + c1*s`` with ``s^2 = D``; in the split case ``c1`` is absent
and sqrt(D) is replaced by its Hensel lift.  Products go through Kronecker
substitution into one big integer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Any, Sequence

import gmpy2

from .families import FamilyModel
from .numring import PadicQuad, PrimeContext, legendre, reduce_mod
from .picardfuchs import FuchsOp
from .polyalg import AlgebraicPoint, Poly

__all__ = [
    "ConstantTermNotUnit",
    "ExceptionalPrime",
    "ModPoly",
    "PCurvature",
    "beta_n",
    "cartier_pattern",
    "congruence_check",
    "degree_bounds",
    "degree_report",
    "expansion_solution",
    "extract_BC",
    "first_disagreement",
    "frob_power",
    "honda_test",
    "nonvanishing_index",
    "p_curvature",
    "prefix_agreement",
    "reduce_operator",
    "verify_mod_solution",
]


class ExceptionalPrime(ValueError):
    pass


class ConstantTermNotUnit(ArithmeticError):
    pass


# --- integer polynomial kernels -------------------------------------------------------

_SCHOOL = 40


def _trim(a: list[int]) -> list[int]:
    while a and not a[-1]:
        a.pop()
    return a


def _school(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pack(a: Sequence[int], nb: int) -> gmpy2.mpz:
    return gmpy2.mpz(int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in a), "little"))


def _imul(a: Sequence[int], b: Sequence[int], bound: int) -> list[int]:
    """Product of nonnegative integer vectors with entries ``< bound``."""
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _SCHOOL:
        return _school(a, b)
    bits = 2 * bound.bit_length() + min(len(a), len(b)).bit_length() + 1
    nb = (bits + 7) // 8
    n = len(a) + len(b) - 1
    prod = int(_pack(a, nb) * _pack(b, nb)) if a is not b else int(_pack(a, nb) ** 2)
    raw = prod.to_bytes(nb * n + nb, "little")
    return [int.from_bytes(raw[k * nb:(k + 1) * nb], "little") for k in range(n)]


def _vadd(a: Sequence[int], b: Sequence[int], m: int, sign: int = 1) -> list[int]:
    if len(a) < len(b):
        out = list(a) + [0] * (len(b) - len(a))
    else:
        out = list(a)
    for i, y in enumerate(b):
        out[i] = (out[i] + sign * y) % m
    return out


# --- polynomials over O_D / p^n -------------------------------------------------------

class ModPoly:
    """Polynomial in ``t`` over ``O_D/p^n``."""

    __slots__ = ("ctx", "c0", "c1")

    def __init__(self, ctx: PrimeContext, c0: Sequence[int], c1: Sequence[int] | None = None):
        m = ctx.modulus
        a = [x % m for x in c0]
        b = [x % m for x in c1] if (c1 is not None and ctx.k == 2) else []
        if c1 is not None and ctx.k == 1:
            r = ctx.sqrtD_rep
            a = _vadd(a, [x * r for x in c1], m)
        n = max(len(a), len(b))
        a += [0] * (n - len(a))
        b += [0] * (n - len(b)) if ctx.k == 2 else []
        while n and not a[n - 1] and (ctx.k == 1 or not b[n - 1]):
            n -= 1
        self.ctx = ctx
        self.c0 = a[:n]
        self.c1 = b[:n] if ctx.k == 2 else None

    @classmethod
    def from_poly(cls, f: Poly, ctx: PrimeContext) -> ModPoly:
        a, b = [], []
        for c in f.coeffs:
            r = reduce_mod(c, ctx)
            a.append(r.c0)
            b.append(r.c1)
        return cls(ctx, a, b if ctx.k == 2 else None)

    @classmethod
    def from_coeffs(cls, ctx: PrimeContext, coeffs: Sequence[PadicQuad]) -> ModPoly:
        return cls(ctx, [c.c0 for c in coeffs], [c.c1 for c in coeffs] if ctx.k == 2 else None)

    @classmethod
    def const(cls, ctx: PrimeContext, c: PadicQuad | int) -> ModPoly:
        if isinstance(c, int):
            return cls(ctx, [c])
        return cls(ctx, [c.c0], [c.c1] if ctx.k == 2 else None)

    @property
    def degree(self) -> int:
        return len(self.c0) - 1

    @property
    def coeffs(self) -> list[PadicQuad]:
        return [self[i] for i in range(len(self.c0))]

    def __len__(self) -> int:
        return len(self.c0)

    def __getitem__(self, i: int) -> PadicQuad:
        if 0 <= i < len(self.c0):
            return PadicQuad(self.ctx, self.c0[i], self.c1[i] if self.c1 is not None else 0)
        return self.ctx.zero()

    def __bool__(self) -> bool:
        return bool(self.c0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self
        return (isinstance(other, ModPoly) and self.ctx == other.ctx
                and self.c0 == other.c0 and self.c1 == other.c1)

    def __hash__(self) -> int:
        return hash((tuple(self.c0), tuple(self.c1 or ())))

    def _new(self, a, b) -> ModPoly:
        return ModPoly(self.ctx, a, b)

    def __add__(self, other: ModPoly) -> ModPoly:
        m = self.ctx.modulus
        b = _vadd(self.c1, other.c1, m) if self.c1 is not None else None
        return self._new(_vadd(self.c0, other.c0, m), b)

    def __sub__(self, other: ModPoly) -> ModPoly:
        m = self.ctx.modulus
        b = _vadd(self.c1, other.c1, m, -1) if self.c1 is not None else None
        return self._new(_vadd(self.c0, other.c0, m, -1), b)

    def __neg__(self) -> ModPoly:
        return self._new([-x for x in self.c0], [-x for x in self.c1] if self.c1 is not None else None)

    def __mul__(self, other) -> ModPoly:
        if isinstance(other, (int, PadicQuad)):
            return self.scale(other)
        m = self.ctx.modulus
        if self.c1 is None:
            return self._new(_imul(self.c0, other.c0, m), None)
        a0, a1, b0, b1 = self.c0, self.c1, other.c0, other.c1
        p00 = _imul(a0, b0, m)
        p11 = _imul(a1, b1, m)
        mid = _imul(_vadd(a0, a1, 2 * m), _vadd(b0, b1, 2 * m), 2 * m)
        D = self.ctx.D
        c0 = _vadd(p00, [D * x for x in p11], m)
        c1 = _vadd(_vadd(mid, p00, m, -1), p11, m, -1)
        return self._new(c0, c1)

    __rmul__ = __mul__

    def scale(self, c) -> ModPoly:
        if isinstance(c, int):
            return self._new([x * c for x in self.c0],
                             [x * c for x in self.c1] if self.c1 is not None else None)
        if self.c1 is None:
            return self._new([x * c.c0 for x in self.c0], None)
        D = self.ctx.D
        a = [x * c.c0 + D * y * c.c1 for x, y in zip(self.c0, self.c1)]
        b = [x * c.c1 + y * c.c0 for x, y in zip(self.c0, self.c1)]
        return self._new(a, b)

    def __pow__(self, e: int) -> ModPoly:
        out = ModPoly(self.ctx, [1])
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def deriv(self) -> ModPoly:
        b = [i * x for i, x in enumerate(self.c1)][1:] if self.c1 is not None else None
        return self._new([i * x for i, x in enumerate(self.c0)][1:], b)

    def __call__(self, x: PadicQuad) -> PadicQuad:
        acc = self.ctx.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reduce(self, n: int) -> ModPoly:
        return ModPoly(self.ctx.with_precision(n), self.c0, self.c1)

    def normalized(self) -> ModPoly:
        """Divide by the constant term, which must be a unit."""
        c = self[0]
        if not c.is_unit():
            raise ConstantTermNotUnit(f"constant term {c} is not a unit mod {self.ctx.p}")
        return self.scale(c.inverse())

    def lc(self) -> PadicQuad:
        return self[self.degree]

    def divmod_field(self, other: ModPoly) -> tuple[ModPoly, ModPoly]:
        """Division with remainder; needs a unit leading coefficient of ``other``."""
        inv = other.lc().inverse()
        r = self
        q_coeffs = [self.ctx.zero()] * max(0, self.degree - other.degree + 1)
        while r and r.degree >= other.degree:
            k = r.degree - other.degree
            c = r.lc() * inv
            q_coeffs[k] = c
            r = r - ModPoly.from_coeffs(self.ctx, [self.ctx.zero()] * k + [c]) * other
        return ModPoly.from_coeffs(self.ctx, q_coeffs), r

    def gcd(self, other: ModPoly) -> ModPoly:
        """Monic gcd; meaningful for n = 1 where the residue ring is a field."""
        a, b = self, other
        while b:
            a, b = b, a.divmod_field(b)[1]
        return a.scale(a.lc().inverse()) if a else a

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "n": self.ctx.n, "c0": self.c0, "c1": self.c1}

    def __repr__(self) -> str:
        return f"ModPoly(deg={self.degree}, {self.ctx})"


# --- expansion coefficients -----------------------------------------------------------

def _check_prime(fm: FamilyModel, ctx: PrimeContext) -> None:
    if ctx.p == 2 or ctx.p in fm.S_exceptional:
        raise ExceptionalPrime(f"p={ctx.p} is exceptional for {fm.key()}")


@dataclass
class BivariateMod:
    """``sum_i x^i f_i(t)`` flattened with stride ``T`` in t."""

    ctx: PrimeContext
    T: int
    flat: ModPoly

    @property
    def x_degree(self) -> int:
        return self.flat.degree // self.T if self.flat else -1

    def coeff_x(self, i: int) -> ModPoly:
        a = self.flat.c0[i * self.T:(i + 1) * self.T]
        b = self.flat.c1[i * self.T:(i + 1) * self.T] if self.flat.c1 is not None else None
        return ModPoly(self.ctx, a, b)

    def __call__(self, x: PadicQuad, t: PadicQuad) -> PadicQuad:
        acc = self.ctx.zero()
        for i in range(self.x_degree, -1, -1):
            acc = acc * x + self.coeff_x(i)(t)
        return acc


def frob_power(fm: FamilyModel, ctx: PrimeContext, x_trunc: int | None = None) -> BivariateMod:
    """``g^((p^n - 1)/2)`` mod p^n, optionally truncated below ``x^x_trunc``."""
    _check_prime(fm, ctx)
    e = (ctx.modulus - 1) // 2
    tdeg = max(c.degree for c in fm.c)
    T = tdeg * e + 1
    polys = [ModPoly.from_poly(c, ctx) for c in fm.c]
    a: list[int] = []
    b: list[int] = []
    for i, f in enumerate(polys):
        pad = i * T - len(a)
        a += [0] * pad + f.c0
        if ctx.k == 2:
            b += [0] * pad + f.c1
    g = ModPoly(ctx, a, b if ctx.k == 2 else None)
    lim = x_trunc * T if x_trunc is not None else None

    def cut(f: ModPoly) -> ModPoly:
        if lim is None or len(f) <= lim:
            return f
        return ModPoly(ctx, f.c0[:lim], f.c1[:lim] if f.c1 is not None else None)

    out = ModPoly(ctx, [1])
    base = cut(g)
    while e:
        if e & 1:
            out = cut(out * base)
        e >>= 1
        if e:
            base = cut(base * base)
    return BivariateMod(ctx, T, out)


@dataclass
class ExpansionCoefficients:
    ctx: PrimeContext
    B1: ModPoly
    B2: ModPoly
    C1: ModPoly
    C2: ModPoly

    def B(self, k: int) -> ModPoly:
        return self.B1 if k == 1 else self.B2

    def C(self, k: int) -> ModPoly:
        return self.C1 if k == 1 else self.C2

    def __iter__(self):
        return iter((self.B1, self.B2, self.C1, self.C2))

    def reduce(self, n: int) -> ExpansionCoefficients:
        return ExpansionCoefficients(self.ctx.with_precision(n), *(f.reduce(n) for f in self))


_BC_CACHE: dict = {}


def extract_BC(fm: FamilyModel, ctx: PrimeContext) -> ExpansionCoefficients:
    """Coefficients of ``x^(q-1), x^(2q-1), x^(q-2), x^(2q-2)`` in ``g^((q-1)/2)``, ``q = p^n``."""
    key = (fm.D, fm.eps, ctx.p, ctx.n)
    if key in _BC_CACHE:
        return _BC_CACHE[key]
    q = ctx.modulus
    h = frob_power(fm, ctx, x_trunc=2 * q)
    res = ExpansionCoefficients(ctx, h.coeff_x(q - 1), h.coeff_x(2 * q - 1),
                                h.coeff_x(q - 2), h.coeff_x(2 * q - 2))
    _BC_CACHE[key] = res
    return res


def nonvanishing_index(D: int, p: int, n: int) -> int:
    """``k`` with ``B_(n,k)`` and ``C_(n,3-k)`` nonzero mod p.

    Split primes keep ``k = 1``; at inert primes Frobenius swaps the two
    eigenlines, so ``k`` alternates, starting from ``k = 2`` at ``n = 1``.
    """
    if legendre(D, p) == 1:
        return 1
    return 2 if n % 2 else 1


def degree_bounds(p: int, n: int, r1: int = 5) -> dict[str, int]:
    q = p**n
    return {
        "d1": (r1 - 2) * (q - 1) // 2,
        "d2": (r1 - 2) * (q - 3) // 6,
        "e1": (r1 - 2) * (3 * q - 1) // 6,
        "e2": (r1 - 2) * (q - 1) // 6,
    }


def _r1(fm: FamilyModel) -> int:
    return sum(c.degree if isinstance(c, AlgebraicPoint) else 1 for c in fm.cusps)


def degree_report(fm: FamilyModel, ctx: PrimeContext) -> dict[str, Any]:
    bc = extract_BC(fm, ctx)
    k = nonvanishing_index(fm.D, ctx.p, ctx.n)
    bd = degree_bounds(ctx.p, ctx.n, _r1(fm))
    degs = {"B1": bc.B1.degree, "B2": bc.B2.degree, "C1": bc.C1.degree, "C2": bc.C2.degree}
    within = (degs["B1"] <= bd["d1"] and degs["B2"] <= bd["d2"]
              and degs["C1"] <= bd["e1"] and degs["C2"] <= bd["e2"])
    attained = (bc.B(k).degree == bd[f"d{k}"] and bc.C(3 - k).degree == bd[f"e{3 - k}"])
    return {"k": k, "degrees": degs, "bounds": bd, "within_bounds": within, "attained": attained}


# --- operators mod p^n --------------------------------------------------------------

def reduce_operator(L: FuchsOp, ctx: PrimeContext) -> tuple[ModPoly, ModPoly, ModPoly]:
    """``(P2, P1, P0)`` of the cleared operator reduced mod p^n."""
    if L.D is not None and L.D != ctx.D:
        raise ValueError("operator and context use different discriminants")
    P2, P1, P0 = L.cleared()
    return tuple(ModPoly.from_poly(P, ctx) for P in (P2, P1, P0))  # type: ignore[return-value]


def _apply(ops: tuple[ModPoly, ModPoly, ModPoly], f: ModPoly) -> ModPoly:
    P2, P1, P0 = ops
    d1 = f.deriv()
    return P2 * d1.deriv() + P1 * d1 + P0 * f


def verify_mod_solution(L: FuchsOp, f: ModPoly) -> bool:
    if not f:
        return True
    return not _apply(reduce_operator(L, f.ctx), f)


# --- Cartier patterns and congruences -------------------------------------------------

def _cusp_nonvanishing(fm: FamilyModel, f: ModPoly) -> dict[str, bool]:
    ctx = f.ctx
    out = {}
    for c in fm.finite_cusps():
        if isinstance(c, AlgebraicPoint):
            m = ModPoly.from_poly(c.minpoly, ctx)
            out[repr(c)] = m.gcd(f).degree == 0
        else:
            out[str(c)] = bool(f(reduce_mod(c, ctx)))
    return out


@dataclass
class CartierReport:
    p: int
    legendre: int
    vanishing: dict[str, bool]
    nonvanishing: dict[str, bool]
    cusp_nonvanishing: dict[str, bool] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return (all(self.vanishing.values()) and all(self.nonvanishing.values())
                and all(self.cusp_nonvanishing.values()))

    def to_json(self) -> dict:
        return {"p": self.p, "legendre": self.legendre, "holds": self.holds,
                "vanishing": self.vanishing, "nonvanishing": self.nonvanishing,
                "cusp_nonvanishing": self.cusp_nonvanishing}


def cartier_pattern(fm: FamilyModel, p: int) -> CartierReport:
    ctx = PrimeContext(fm.D, p, 1) if p not in fm.S_exceptional else None
    if ctx is None:
        raise ExceptionalPrime(f"p={p} is exceptional for {fm.key()}")
    bc = extract_BC(fm, ctx)
    leg = legendre(fm.D, p)
    if leg == 1:
        zero, nonzero = {"B12": bc.B2, "C11": bc.C1}, {"B11": bc.B1, "C12": bc.C2}
    else:
        zero, nonzero = {"B11": bc.B1, "C12": bc.C2}, {"B12": bc.B2, "C11": bc.C1}
    k = nonvanishing_index(fm.D, p, 1)
    return CartierReport(
        p, leg,
        {k_: not f for k_, f in zero.items()},
        {k_: bool(f) for k_, f in nonzero.items()},
        _cusp_nonvanishing(fm, bc.B(k)),
    )


def congruence_check(fm: FamilyModel, p: int, n: int, *, detail: bool = False):
    """Frobenius congruences between levels ``n`` and ``n+1`` mod p.

    From ``g^((p^(n+1)-1)/2) = (g^p)^((p^n-1)/2) g^((p-1)/2)``:
    ``B_(n+1,k) = B_(n,k)^p B_(1,1) + C_(n,k)^p B_(1,2)`` and
    ``C_(n+1,k) = B_(n,k)^p C_(1,1) + C_(n,k)^p C_(1,2)``.  In the split case
    this collapses to ``B_(n+1,1) = B_(n,1)^p B_(1,1)``, in the inert case to
    ``B_(n+1,k) = C_(n,k)^p B_(1,2)`` and ``C_(n+1,k) = B_(n,k)^p C_(1,1)``.
    """
    if n < 1:
        raise ValueError("n >= 1")
    one = PrimeContext(fm.D, p, 1)
    lvl1 = extract_BC(fm, one)
    lvl_n = extract_BC(fm, PrimeContext(fm.D, p, n)).reduce(1)
    lvl_n1 = extract_BC(fm, PrimeContext(fm.D, p, n + 1)).reduce(1)
    checks: dict[str, bool] = {}
    for k in (1, 2):
        Bp, Cp = lvl_n.B(k) ** p, lvl_n.C(k) ** p
        checks[f"B{n + 1},{k} general"] = lvl_n1.B(k) == Bp * lvl1.B1 + Cp * lvl1.B2
        checks[f"C{n + 1},{k} general"] = lvl_n1.C(k) == Bp * lvl1.C1 + Cp * lvl1.C2
    if legendre(fm.D, p) == 1:
        checks[f"B{n + 1},1 = B{n},1^p B1,1"] = lvl_n1.B1 == lvl_n.B1 ** p * lvl1.B1
        checks[f"C{n + 1},2 = C{n},2^p C1,2"] = lvl_n1.C2 == lvl_n.C2 ** p * lvl1.C2
        e = sum(p**i for i in range(n + 1))
        checks[f"B{n + 1},1 = B1,1^{e}"] = lvl_n1.B1 == lvl1.B1 ** e
    else:
        for k in (1, 2):
            checks[f"B{n + 1},{k} = C{n},{k}^p B1,2"] = lvl_n1.B(k) == lvl_n.C(k) ** p * lvl1.B2
            checks[f"C{n + 1},{k} = B{n},{k}^p C1,1"] = lvl_n1.C(k) == lvl_n.B(k) ** p * lvl1.C1
    ok = all(checks.values())
    return (ok, checks) if detail else ok


# --- beta_n / gamma_n ---------------------------------------------------------------

@dataclass
class BetaReport:
    i: int
    p: int
    n: int
    beta: int
    gamma_inf: Fraction
    congruence_ok: bool
    lower_bound: Fraction
    bound_ok: bool

    def __iter__(self):
        return iter((self.beta, self.congruence_ok))

    def to_json(self) -> dict:
        return {"i": self.i, "p": self.p, "n": self.n, "beta": self.beta,
                "gamma_inf": str(self.gamma_inf), "congruence_ok": self.congruence_ok,
                "lower_bound": str(self.lower_bound), "bound_ok": self.bound_ok}


_LAMBDA2 = {17: Fraction(1, 3), 13: Fraction(1, 3)}


def expansion_solution(fm: FamilyModel, i: int, ctx: PrimeContext) -> ModPoly:
    """The nonvanishing expansion polynomial solving ``L_i`` mod p^n."""
    bc = extract_BC(fm, ctx)
    k = nonvanishing_index(fm.D, ctx.p, ctx.n)
    return bc.B(k) if i == 1 else bc.C(3 - k)


def beta_n(fm: FamilyModel, i: int, ctx: PrimeContext) -> BetaReport:
    if i not in (1, 2):
        raise ValueError("i in {1, 2}")
    r1 = _r1(fm)
    lam2 = _LAMBDA2.get(fm.D, Fraction(1, 3))
    gam = Fraction(r1 - 2, 2) if i == 1 else lam2 * (r1 - 2) / 2
    r = r1 if i == 1 else r1 + 2
    v = expansion_solution(fm, i, ctx).normalized()
    width = r - 2
    beta = None
    run = 0
    for j in range(1, len(v) + width + 1):
        if v[j]:
            run = 0
            continue
        run += 1
        if run == width:
            beta = j - width
            break
    assert beta is not None
    N = ceil(ctx.n / 2)
    pN = ctx.p**N
    x = beta + gam
    cong = x.numerator % pN == 0
    if i == 1:
        lb = Fraction(pN - r1 + 2, 2) if r1 % 2 else Fraction(pN) - Fraction(r1 - 2, 2)
    else:
        lb = (pN - (r1 - 2) * lam2) / 2
    return BetaReport(i, ctx.p, ctx.n, beta, gam, cong, lb, beta >= lb)


def first_disagreement(fm: FamilyModel, L: FuchsOp, ctx: PrimeContext, i: int = 1,
                       upto: int | None = None) -> int | None:
    """Smallest ``j <= upto`` where the holomorphic solution and the normalized
    expansion polynomial differ mod p^n (``upto`` defaults to ``beta_n``)."""
    from .series import holomorphic_solution
    if upto is None:
        upto = beta_n(fm, i, ctx).beta
    v = expansion_solution(fm, i, ctx).normalized()
    u = holomorphic_solution(L, upto)
    return next((j for j in range(upto + 1) if reduce_mod(u[j], ctx) != v[j]), None)


def prefix_agreement(fm: FamilyModel, L: FuchsOp, ctx: PrimeContext, i: int = 1,
                     upto: int | None = None) -> bool:
    """Coefficientwise agreement mod p^n up to ``upto`` (default ``beta_n``).

    The band recursion leaves ``v_p`` undetermined (its leading coefficient
    is a multiple of ``(j+1)^2``), so agreement is only forced below ``p``.
    """
    return first_disagreement(fm, L, ctx, i, upto) is None


# --- Honda test ------------------------------------------------------------------------

def _bands(ops: tuple[ModPoly, ModPoly, ModPoly]):
    P2, P1, P0 = ops
    P = [P0, P1, P2]
    lo = min(next(k for k in range(len(P[d])) if P[d][k]) - d for d in range(3) if P[d])
    hi = max(P[d].degree - d for d in range(3) if P[d])
    return P, lo, hi


def _band_coeff(P, n: int, s: int, ctx: PrimeContext) -> PadicQuad:
    acc = ctx.zero()
    for d in range(3):
        k = s + d
        if 0 <= k < len(P[d]):
            c = P[d][k]
            if c:
                ff = 1
                for i in range(d):
                    ff *= n - s - i
                if ff:
                    acc = acc + c * ff
    return acc


@dataclass
class HondaResult:
    has_solution: bool
    bound: int
    witness: ModPoly | None

    def __bool__(self) -> bool:
        return self.has_solution


def _op_context(L: FuchsOp, p: int, D: int | None) -> PrimeContext:
    D = L.D if L.D is not None else D
    if D is None:
        # rational coefficients: any auxiliary discriminant prime to p will do
        D = next(d for d in (5, 13, 17) if d % p)
    return PrimeContext(D, p, 1)


def _default_bound(ops, p: int) -> int:
    r = ops[0].degree + 1
    return max(0, (r - 2) * (p - 1) // 2) + p


def honda_test(L: FuchsOp | tuple, p: int, bound: int | None = None, D: int | None = None) -> HondaResult:
    """Search for a nonzero polynomial solution mod p of degree ``<= bound``."""
    if isinstance(L, FuchsOp):
        ctx = _op_context(L, p, D)
        ops = reduce_operator(L, ctx)
    else:
        ops = L
        ctx = ops[0].ctx
    if bound is None:
        bound = _default_bound(ops, p)
    P, lo, hi = _bands(ops)
    zero, one = ctx.zero(), ctx.one()
    # u_j as coefficient vectors over the free parameters
    u: list[list[PadicQuad]] = []
    nfree = 0
    constraints: list[list[PadicQuad]] = []

    def lin(vals, coeffs):
        out = [zero] * nfree
        for c, v in zip(coeffs, vals):
            if not c:
                continue
            for k, x in enumerate(v):
                if x:
                    out[k] = out[k] + c * x
        return out

    def new_free():
        nonlocal nfree
        nfree += 1
        for v in u:
            v.append(zero)
        for row in constraints:
            row.append(zero)
        return [zero] * (nfree - 1) + [one]

    for _ in range(min(-lo, bound + 1)):
        u.append(new_free())
    for n in range(0, bound + hi + 1):
        lead = n - lo
        terms = [(s, n - s) for s in range(lo + 1, hi + 1) if 0 <= n - s <= bound]
        cs = [_band_coeff(P, n, s, ctx) for s, _ in terms]
        rhs = lin([u[j] for _, j in terms], cs)
        if lead <= bound:
            c = _band_coeff(P, n, lo, ctx)
            if c:
                ci = -(c.inverse())
                u.append([x * ci for x in rhs])
                continue
            constraints.append(rhs)
            u.append(new_free())
        else:
            constraints.append(rhs)
    kernel = _kernel_vector(constraints, nfree, ctx)
    if kernel is None:
        return HondaResult(False, bound, None)
    coeffs = []
    for v in u:
        acc = zero
        for c, x in zip(v, kernel):
            if c and x:
                acc = acc + c * x
        coeffs.append(acc)
    return HondaResult(True, bound, ModPoly.from_coeffs(ctx, coeffs))


def _kernel_vector(rows: list[list[PadicQuad]], ncols: int, ctx: PrimeContext):
    rows = [list(r) + [ctx.zero()] * (ncols - len(r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    fc = free[0]
    vec = [ctx.zero()] * ncols
    vec[fc] = ctx.one()
    for i, c in enumerate(pivots):
        vec[c] = -rows[i][fc]
    return vec


# --- p-curvature -------------------------------------------------------------------------

@dataclass
class PCurvature:
    """``psi = N / P2^p`` for the companion system of the cleared operator."""

    ctx: PrimeContext
    N: list[list[ModPoly]]
    den: ModPoly
    nilpotent: bool
    zero: bool

    def trace(self) -> ModPoly:
        return self.N[0][0] + self.N[1][1]

    def det(self) -> ModPoly:
        return self.N[0][0] * self.N[1][1] - self.N[0][1] * self.N[1][0]

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "nilpotent": self.nilpotent, "zero": self.zero,
                "entry_degrees": [[e.degree for e in row] for row in self.N],
                "den_degree": self.den.degree}


def _matmul(X, Y):
    return [[X[i][0] * Y[0][j] + X[i][1] * Y[1][j] for j in range(2)] for i in range(2)]


def p_curvature(L: FuchsOp | tuple, p: int, D: int | None = None) -> PCurvature:
    """Iterate ``N_(k+1) = P2 N_k' - k P2' N_k + N_k Mnum`` from ``N_1 = Mnum``."""
    if isinstance(L, FuchsOp):
        ctx = _op_context(L, p, D)
        P2, P1, P0 = reduce_operator(L, ctx)
    else:
        P2, P1, P0 = L
        ctx = P2.ctx
    z = ModPoly(ctx, [])
    Mn = [[z, P2], [-P0, -P1]]
    dP2 = P2.deriv()
    N = Mn
    for k in range(1, p):
        prod = _matmul(N, Mn)
        N = [[P2 * N[i][j].deriv() - (dP2 * N[i][j]).scale(k) + prod[i][j] for j in range(2)]
             for i in range(2)]
    tr = N[0][0] + N[1][1]
    det = N[0][0] * N[1][1] - N[0][1] * N[1][0]
    return PCurvature(ctx, N, P2**p, not tr and not det, not any(e for row in N for e in row))
