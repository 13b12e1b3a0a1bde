"""Picard-Fuchs operators of the eigenforms dx/y and x dx/y.

Classes in H^1_dR of ``y^2 = g(x)`` (g monic of degree 5) are written in the
basis ``x^i dx/y`` (i = 0..3).  Forms ``P dx/y^m`` are reduced with

* ``R P = U g + V g'`` and ``V g' dx/y^m = 2V'/(m-2) dx/y^(m-2) + exact``;
* ``d(x^k y) = (k x^(k-1) g + x^k g'/2) dx/y`` to lower the x-degree.

Over the function field the inverse of ``g'`` modulo ``g`` is cleared to a
polynomial multiple ``R``, so everything stays in ``K[t]`` until the final
linear solve.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

from .families import INF, FamilyModel, family
from .numring import QuadNum
from .polyalg import (AlgebraicPoint, Poly, QuotientElem, RationalFunction,
                      squarefree_decomposition, squarefree_multiple_roots)

__all__ = [
    "DeRham",
    "FuchsOp",
    "H1Class",
    "IrregularSingularity",
    "NonRationalExponent",
    "NotRankTwo",
    "Singularity",
    "SingularFiber",
    "bareiss_solve",
    "classify_singularities",
    "derive_ode",
    "dr_reduce",
    "exactness_certificate",
    "fuchs_relation_check",
    "gauge_transform",
    "gauss_manin",
    "ks_quadratic",
    "local_exponents",
    "printed_operator",
    "with_singularities",
]


class SingularFiber(ArithmeticError):
    pass


class NotRankTwo(ArithmeticError):
    pass


class IrregularSingularity(ArithmeticError):
    pass


class NonRationalExponent(ArithmeticError):
    pass


def bareiss_solve(M: list[list], rhs: Sequence) -> tuple[Any, list]:
    """Fraction-free solve: returns ``(d, x)`` with ``M x = d * rhs`` and ``d = +-det M``."""
    n = len(M)
    a = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    prev: Any = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise SingularFiber("singular matrix in fraction-free solve")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                v = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = _exdiv(v, prev)
            a[i][k] = 0
        prev = a[k][k]
    d = a[n - 1][n - 1]
    x: list = [0] * n
    for i in range(n - 1, -1, -1):
        s = d * a[i][n]
        for j in range(i + 1, n):
            if a[i][j]:
                s = s - a[i][j] * x[j]
        x[i] = _exdiv(s, a[i][i])
    return d, x


def _exdiv(a, b):
    if isinstance(b, int) and b == 1:
        return a
    if not a:
        return a
    if isinstance(a, Poly):
        return a.exact_div(b)
    return _qdiv(a, b)


def _qdiv(a, b):
    # int / int must stay exact
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if not r else Fraction(a, b)
    return a / b


@dataclass(frozen=True)
class H1Class:
    """``sum coords[i] * x^i dx/y``."""

    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 4:
            raise ValueError("H1Class needs four coordinates")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: H1Class) -> H1Class:
        return H1Class(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, s) -> H1Class:
        return H1Class(tuple(c * s for c in self.coords))

    def to_json(self) -> list:
        return [c.to_json() if hasattr(c, "to_json") else str(c) for c in self.coords]


class DeRham:
    """Reduction of ``P dx/y^m`` on ``y^2 = g`` with g monic of degree 5.

    Coefficients of ``g`` may lie in a field or in a polynomial ring ``K[t]``;
    in the latter case results carry a power of the cleared denominator ``R``.
    """

    def __init__(self, g: Poly):
        if g.degree != 5 or not g.lc() == 1:
            raise ValueError("expected a monic quintic")
        self.g = g
        self.gp = g.deriv()
        x = Poly.gen(g.var)
        cols = []
        for j in range(5):
            r = (x.shift(j - 1) * self.gp) % g if j else self.gp % g
            cols.append([r[i] for i in range(5)])
        M = [[cols[j][i] for j in range(5)] for i in range(5)]
        zero = self._zero()
        rhs = [zero + 1] + [zero] * 4
        try:
            R, coords = bareiss_solve(M, rhs)
        except SingularFiber as exc:
            raise SingularFiber("g and g' are not coprime") from exc
        if not R:
            raise SingularFiber("g and g' are not coprime")
        self.R = R
        self.b = Poly(coords, g.var)

    def _zero(self):
        c = self.g[0]
        if isinstance(c, Poly):
            return Poly([], c.var)
        return 0 * c if not isinstance(c, int) else Fraction(0)

    def _lower(self, P: Poly, m: int) -> Poly:
        """``R * P dx/y^m`` as a numerator over ``y^(m-2)``."""
        V = (P * self.b) % self.g
        U = (P.scale(self.R) - V * self.gp).exact_div(self.g) if P else P
        return U + V.deriv().scale(Fraction(2, m - 2))

    def _degree_reduce(self, P: Poly) -> Poly:
        while P.degree >= 4:
            k = P.degree - 4
            c = P.lc() * Fraction(2, 2 * k + 5)
            ex = self.gp.scale(Fraction(1, 2)).shift(k)
            if k:
                ex = ex + self.g.scale(k).shift(k - 1)
            P = P - ex.scale(c)
        return P

    def reduce(self, P: Poly, m: int) -> tuple[list, int]:
        """Coordinates (x^0..x^3) of ``R^e * [P dx/y^m]`` together with ``e``."""
        if m < 1 or m % 2 == 0:
            raise ValueError("m must be a positive odd integer")
        e = 0
        while m > 1:
            P = self._lower(P, m)
            m -= 2
            e += 1
        P = self._degree_reduce(P)
        return [P[i] for i in range(4)], e


def dr_reduce(P: Poly, m: int, g: Poly) -> H1Class:
    """Class of ``P dx/y^m`` with coordinates over the fraction field of g's coefficients."""
    dr = DeRham(g)
    coords, e = dr.reduce(P, m)
    if e == 0:
        return H1Class(tuple(_to_field(c) for c in coords))
    den = dr.R**e
    return H1Class(tuple(_to_field(c) / den if isinstance(den, Poly) else _qdiv(c, den)
                         for c in coords))


def _to_field(c):
    if isinstance(c, Poly):
        return RationalFunction(c)
    return c


# --- Gauss-Manin ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _derham(fm: FamilyModel) -> DeRham:
    return DeRham(fm.g())


def _rf_vector(coords: list, R: Poly, e: int) -> tuple:
    den = R**e if e else Poly([1], "t")
    return tuple(RationalFunction(c if isinstance(c, Poly) else Poly.const(c), den) for c in coords)


@lru_cache(maxsize=None)
def gauss_manin(fm: FamilyModel, i: int, order: int) -> H1Class:
    """Class of the t-derivative of order ``order`` of ``x^(i-1) dx/y``."""
    if i not in (1, 2) or order not in (0, 1, 2):
        raise ValueError("i in {1,2}, order in {0,1,2}")
    dr = _derham(fm)
    xi = Poly.gen("x").shift(i - 2) if i == 2 else Poly([Poly([QuadNum(1, 0, fm.D)], "t")], "x")
    if order == 0:
        one = RationalFunction(Poly([QuadNum(1, 0, fm.D)], "t"))
        zero = RationalFunction(Poly([], "t"))
        return H1Class(tuple(one if k == i - 1 else zero for k in range(4)))
    gt = fm.g_t(1)
    half = Fraction(1, 2)
    if order == 1:
        P = (gt * xi).scale(-half)
        coords, e = dr.reduce(P, 3)
        return H1Class(_rf_vector(coords, dr.R, e))
    gtt = fm.g_t(2)
    P5 = (gt * gt * xi).scale(Fraction(3, 4))
    P3 = (gtt * xi).scale(-half)
    c5, e5 = dr.reduce(P5, 5)
    c3, e3 = dr.reduce(P3, 3)
    # bring both to R^e5
    lift = dr.R ** (e5 - e3)
    coords = [a + b * lift for a, b in zip(c5, c3)]
    return H1Class(_rf_vector(coords, dr.R, e5))


# --- operators -----------------------------------------------------------------------

@dataclass
class Singularity:
    point: Any
    exponents: tuple[Fraction, Fraction]
    kind: str

    def multiplicity(self) -> int:
        return self.point.degree if isinstance(self.point, AlgebraicPoint) else 1

    def to_json(self) -> dict:
        pt = self.point
        if pt == INF:
            pj: Any = "inf"
        elif isinstance(pt, int):
            pj = pt
        else:
            pj = pt.to_json()
        return {"point": pj, "exponents": [str(e) for e in self.exponents], "kind": self.kind}


@dataclass
class FuchsOp:
    """``u'' + A u' + B u``."""

    A: RationalFunction
    B: RationalFunction
    singularities: list[Singularity] = field(default_factory=list)
    D: int | None = None

    def conj(self) -> FuchsOp:
        return FuchsOp(self.A.conj(), self.B.conj(), [], self.D)

    def __eq__(self, other) -> bool:
        return isinstance(other, FuchsOp) and self.A == other.A and self.B == other.B

    def cleared(self) -> tuple[Poly, Poly, Poly]:
        """Polynomials ``(P2, P1, P0)`` with ``P2`` monic and ``P2 L = P2 d^2 + P1 d + P0``."""
        den = _lcm(self.A.den, self.B.den)
        P1 = self.A.num * (den // self.A.den)
        P0 = self.B.num * (den // self.B.den)
        return den, P1, P0

    def apply(self, u):
        """``L u`` for a RationalFunction or Poly ``u``."""
        if isinstance(u, Poly):
            u = RationalFunction(u)
        du = u.deriv()
        return du.deriv() + self.A * du + self.B * u

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "singularities": [s.to_json() for s in self.singularities],
        }


def _lcm(a: Poly, b: Poly) -> Poly:
    g = a.gcd(b)
    return (a // g) * b if g.degree > 0 else a * b


def derive_ode(fm: FamilyModel, i: int) -> FuchsOp:
    """Solve ``c0 [w] + c1 [w'] + [w''] = 0`` in H^1 over K(t)."""
    w0 = gauss_manin(fm, i, 0).coords
    w1 = gauss_manin(fm, i, 1).coords
    w2 = gauss_manin(fm, i, 2).coords
    k0 = i - 1
    others = [j for j in range(4) if j != k0]
    piv = next((j for j in others if w1[j]), None)
    if piv is None:
        raise NotRankTwo("derivative has no component off the form itself")
    c1 = -w2[piv] / w1[piv]
    for j in others:
        if c1 * w1[j] + w2[j]:
            raise NotRankTwo(f"inconsistent equation in coordinate x^{j}")
    c0 = -(c1 * w1[k0] + w2[k0]) / w0[k0]
    L = FuchsOp(c1, c0, [], fm.D)
    L.singularities = classify_singularities(L, fm)
    return L


def exactness_certificate(fm: FamilyModel, i: int, L: FuchsOp) -> H1Class:
    """``[w''] + A [w'] + B [w]``; the zero class certifies the operator."""
    w0 = gauss_manin(fm, i, 0)
    w1 = gauss_manin(fm, i, 1)
    w2 = gauss_manin(fm, i, 2)
    return w2 + w1.scale(L.A) + w0.scale(L.B)


# --- singularities and exponents ------------------------------------------------------

def _residue_data(f: RationalFunction, pt, order: int):
    """``lim (t - pt)^order f`` at a point of K or at an AlgebraicPoint."""
    if isinstance(pt, AlgebraicPoint):
        m = pt.minpoly
        num, den = f.num, f.den
        k = 0
        while den.degree >= m.degree:
            q, r = divmod(den, m)
            if r:
                break
            den, k = q, k + 1
        if k > order:
            raise IrregularSingularity(f"pole of order {k} > {order} at {pt}")
        if k < order:
            return QuotientElem(Poly([], m.var), pt)
        mp = QuotientElem(m.deriv(), pt)
        val = QuotientElem(num, pt) / (QuotientElem(den, pt) * mp**order)
        return val
    lin = Poly([-pt, 1], f.var)
    num, den = f.num, f.den
    k = 0
    while den.degree >= 1:
        q, r = divmod(den, lin)
        if r:
            break
        den, k = q, k + 1
    if k > order:
        raise IrregularSingularity(f"pole of order {k} > {order} at {pt}")
    if k < order:
        return 0
    return num(pt) / den(pt)


def _as_rational(v) -> Fraction:
    if isinstance(v, QuotientElem):
        try:
            v = v.scalar()
        except ValueError as exc:
            raise NonRationalExponent("indicial coefficient not in the base field") from exc
    if isinstance(v, QuadNum):
        if not v.is_rational():
            raise NonRationalExponent(f"indicial coefficient {v} is irrational")
        return v.a
    return Fraction(v)


def _indicial_roots(p1, p2) -> tuple[Fraction, Fraction]:
    a = _as_rational(p1) - 1
    b = _as_rational(p2)
    disc = a * a - 4 * b
    if disc < 0:
        raise NonRationalExponent("complex local exponents")
    n, d = disc.numerator, disc.denominator
    from math import isqrt
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise NonRationalExponent(f"indicial discriminant {disc} is not a square")
    r = Fraction(rn, rd)
    return tuple(sorted(((-a - r) / 2, (-a + r) / 2)))  # type: ignore[return-value]


def local_exponents(L: FuchsOp, pt) -> tuple[Fraction, Fraction]:
    if pt == INF:
        t = Poly.gen(L.A.var)
        tA = L.A * RationalFunction(t)
        t2B = L.B * RationalFunction(t * t)
        p1 = 2 - _limit_at_infinity(tA)
        p2 = _limit_at_infinity(t2B)
        return _indicial_roots(p1, p2)
    p1 = _residue_data(L.A, pt, 1)
    p2 = _residue_data(L.B, pt, 2)
    return _indicial_roots(p1, p2)


def _limit_at_infinity(f: RationalFunction):
    o = f.order_at_infinity()
    if o < 0:
        raise IrregularSingularity("growth at infinity")
    if o > 0:
        return 0
    return f.num.lc() / f.den.lc()


def _split_points(den: Poly) -> list:
    pts = []
    for fac, _ in squarefree_decomposition(den):
        if fac.degree > 2:
            for sub in _factor_known(fac):
                pts.extend(sub)
            continue
        for r, _m in squarefree_multiple_roots(fac):
            pts.append(r)
    return pts


def _factor_known(f: Poly) -> list[list]:
    """Peel off linear factors over Q of a square-free polynomial, then split what is left."""
    out: list[list] = []
    rest = f
    for cand in _rational_root_candidates(f):
        lin = Poly([-cand, 1], f.var)
        q, r = divmod(rest, lin)
        if not r:
            out.append([cand])
            rest = q
    if rest.degree > 2:
        raise IrregularSingularity(f"cannot split singular locus of degree {rest.degree}")
    if rest.degree >= 1:
        out.append([r for r, _m in squarefree_multiple_roots(rest)])
    return out


def _rational_root_candidates(f: Poly) -> list:
    return [0, 1, -1]


def classify_singularities(L: FuchsOp, fm: FamilyModel | None = None) -> list[Singularity]:
    den = _lcm(L.A.den, L.B.den)
    cusp_pts: list = []
    if fm is not None:
        cusp_pts = fm.finite_cusps()
    rest = den
    pts: list = []
    for cp in cusp_pts:
        m = cp.minpoly if isinstance(cp, AlgebraicPoint) else Poly([-cp, 1], den.var)
        q, r = divmod(rest, m)
        if not r:
            rest = q
            while True:
                q2, r2 = divmod(rest, m)
                if r2:
                    break
                rest = q2
            pts.append((cp, "cusp"))
    if rest.degree > 0:
        for p in _split_points(rest):
            pts.append((p, "ks_zero" if fm is not None else "singular"))
    out = []
    for p, kind in pts:
        out.append(Singularity(p, local_exponents(L, p), kind))
    out.append(Singularity(INF, local_exponents(L, INF), "infinity"))
    return out


def fuchs_relation_check(L: FuchsOp) -> bool:
    total = Fraction(0)
    r = 0
    for s in L.singularities:
        k = s.multiplicity()
        total += k * (s.exponents[0] + s.exponents[1])
        r += k
    return total == r - 2


def gauge_transform(L: FuchsOp, f: RationalFunction) -> FuchsOp:
    """Operator annihilating ``f u`` whenever ``L u = 0``."""
    if isinstance(f, Poly):
        f = RationalFunction(f)
    if not f:
        raise ValueError("gauge factor must be nonzero")
    phi = f.deriv() / f
    A = L.A - phi * 2
    B = L.B - L.A * phi + phi * phi - phi.deriv()
    return FuchsOp(A, B, [], L.D)


def with_singularities(L: FuchsOp, points: Sequence) -> FuchsOp:
    L.singularities = [Singularity(p, local_exponents(L, p), "infinity" if p == INF else "singular")
                       for p in points]
    return L


# --- printed operators ---------------------------------------------------------------

def _P(fm: FamilyModel) -> Poly:
    t = Poly.gen("t")
    one = QuadNum(1, 0, fm.D)
    return (t * (t - one)) * fm.cusp_quadratic


def printed_operator(fm: FamilyModel, i: int) -> FuchsOp:
    """The closed forms of the operators for the +sqrt(D) models."""
    D = fm.D
    s = QuadNum.sqrt_d(D)
    q = lambda a, b=0: QuadNum(a, b, D)  # noqa: E731
    P = _P(family(D, 1))
    Pp = P.deriv()
    A1 = RationalFunction(Pp, P)
    if D == 17:
        B1 = RationalFunction(Poly([q(1296, -240), q(-4557, 891), q(576)], "t"), P.scale(q(256)))
        Q = Poly([q(128), q(137, -95), q(128)], "t").monic()
        Bn = Poly([q(47104, -10240), q(-177536, 38528), q(-260375, 69633),
                   q(35616, -12768), q(4096)], "t")
        B2 = RationalFunction(Bn, (Q * P).scale(q(2**14)))
    elif D == 13:
        B1 = RationalFunction(Poly([q(192, -120), q(-576, 333), q(1152)], "t"), P.scale(q(512)))
        Q = Poly([q(1), (5 + 28 * s) / 48, q(1)], "t")
        Bn = Poly([q(-80181, 21234), q(0), q(698944, 5744), q(67584, 135936), q(98304)], "t")
        B2 = RationalFunction(Bn, (Q * P).scale(q(2**17 * 3)))
    else:
        raise ValueError(f"no printed operator for D={D}")
    if i == 1:
        L = FuchsOp(A1, B1, [], D)
    else:
        A2 = A1 - RationalFunction(Q.deriv(), Q)
        L = FuchsOp(A2, B2, [], D)
    if fm.eps == 0:
        L = L.conj()
    return L


def ks_quadratic(L: FuchsOp, fm: FamilyModel) -> Poly | None:
    """Monic polynomial whose roots are the non-cusp singularities."""
    den = _lcm(L.A.den, L.B.den)
    rest = den
    for cp in fm.finite_cusps():
        m = cp.minpoly if isinstance(cp, AlgebraicPoint) else Poly([-cp, 1], "t")
        while True:
            q, r = divmod(rest, m)
            if r:
                break
            rest = q
    return rest.monic() if rest.degree > 0 else None
