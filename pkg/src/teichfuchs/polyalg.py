"""Dense polynomials, rational functions, truncated series and algebraic points.

Coefficients may be any of the exact scalar types of :mod:`teichfuchs.numring`,
Python ints/Fractions, :class:`RationalFunction`, or another :class:`Poly`
in a different variable (for bivariate work).  Polynomials carry a variable
name; a ``Poly`` in a different variable is treated as a scalar.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .numring import QuadNum, quad_sqrt

__all__ = [
    "AlgebraicPoint",
    "NonUnitConstantTerm",
    "Poly",
    "PoleAtPoint",
    "QuotientElem",
    "RationalFunction",
    "SeriesPrefix",
    "UnsplittableFactor",
    "discriminant_x",
    "eval_at_algebraic",
    "reciprocal_check",
    "resultant",
    "squarefree_decomposition",
    "squarefree_multiple_roots",
]

KARATSUBA_CUTOFF = 64


class UnsplittableFactor(ArithmeticError):
    pass


class NonUnitConstantTerm(ArithmeticError):
    pass


class PoleAtPoint(ZeroDivisionError):
    pass


def _inv(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def _exact_div(a, b):
    """Exact quotient in an integral domain (Poly or field scalar)."""
    if not a:
        return a
    if isinstance(a, Poly) and isinstance(b, Poly) and a.var == b.var:
        return a.exact_div(b)
    if isinstance(a, Poly):
        return a.exact_div(b) if isinstance(b, Poly) else a.scale(_inv(b))
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{a} not divisible by {b}")
        return q
    return a / b


def _is_one(x) -> bool:
    try:
        return x == 1
    except TypeError:
        return False


def _mul_school(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if not bj:
            continue
        for i, ai in enumerate(a):
            if ai:
                out[i + j] = out[i + j] + ai * bj
    return out


def _add_into(out: list, src: Sequence, shift: int, sign: int = 1) -> None:
    for i, c in enumerate(src):
        if c:
            out[i + shift] = out[i + shift] + c if sign > 0 else out[i + shift] - c


def _mul_kara(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    if min(len(a), len(b)) <= KARATSUBA_CUTOFF:
        return _mul_school(a, b)
    h = n // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _mul_kara(a0, b0) if a0 and b0 else []
    z2 = _mul_kara(a1, b1) if a1 and b1 else []
    sa = _vec_add(a0, a1)
    sb = _vec_add(b0, b1)
    z1 = _mul_kara(sa, sb) if sa and sb else []
    out = [0] * (len(a) + len(b) - 1)
    _add_into(out, z0, 0)
    _add_into(out, z2, 2 * h)
    mid = list(z1)
    for i, c in enumerate(z0):
        mid[i] = mid[i] - c
    for i, c in enumerate(z2):
        mid[i] = mid[i] - c
    _add_into(out, mid, h)
    return out


def _vec_add(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return out


class Poly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of ``var**i``."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "t"):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.coeffs: tuple = tuple(c)
        self.var = var

    @classmethod
    def const(cls, c, var: str = "t") -> Poly:
        return cls([c], var)

    @classmethod
    def gen(cls, var: str = "t") -> Poly:
        return cls([0, 1], var)

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = "t") -> Poly:
        out = cls([1], var)
        for r in roots:
            out = out * cls([-r, 1], var)
        return out

    def _wrap(self, c: list) -> Poly:
        return Poly(c, self.var)

    def _same(self, other) -> bool:
        return isinstance(other, Poly) and other.var == self.var

    def _defer(self, other) -> bool:
        return isinstance(other, RationalFunction) and other.var == self.var

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if self._same(other):
            return len(self.coeffs) == len(other.coeffs) and all(
                a == b for a, b in zip(self.coeffs, other.coeffs))
        if isinstance(other, Poly):
            return self.degree <= 0 and self[0] == other
        if self.degree <= 0:
            return self[0] == other
        return False

    def __hash__(self) -> int:
        return hash((self.var, self.coeffs))

    def __add__(self, other):
        if self._defer(other):
            return NotImplemented
        if self._same(other):
            return self._wrap(_vec_add(self.coeffs, other.coeffs))
        c = list(self.coeffs) or [0]
        c[0] = c[0] + other
        return self._wrap(c)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return self._wrap([-c for c in self.coeffs])

    def __sub__(self, other):
        if self._defer(other):
            return NotImplemented
        if self._same(other):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._defer(other):
            return NotImplemented
        if self._same(other):
            if not self.coeffs or not other.coeffs:
                return self._wrap([])
            return self._wrap(_mul_kara(self.coeffs, other.coeffs))
        return self.scale(other)

    def __rmul__(self, other):
        if self._defer(other):
            return NotImplemented
        return self.scale(other)

    def scale(self, s) -> Poly:
        if not s:
            return self._wrap([])
        return self._wrap([c * s for c in self.coeffs])

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out, base = self._wrap([1]), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __truediv__(self, other):
        if self._defer(other):
            return NotImplemented
        if self._same(other):
            q, r = divmod(self, other)
            if r:
                raise ArithmeticError("inexact polynomial division")
            return q
        return self.scale(_inv(other))

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        lc = other.coeffs[-1]
        monic = _is_one(lc)
        inv = None if monic else _inv(lc)
        if len(r) <= db:
            return self._wrap([]), self
        q = [0] * (len(r) - db)
        bc = other.coeffs
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if not c:
                continue
            if not monic:
                c = c * inv
            q[i - db] = c
            for j in range(db):
                if bc[j]:
                    r[i - db + j] = r[i - db + j] - c * bc[j]
            r[i] = 0
        return self._wrap(q), self._wrap(r[:db])

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        """Quotient when ``other`` divides ``self`` in ``R[var]`` for a domain R."""
        if not self._same(other):
            if isinstance(other, Poly) and self.coeffs and isinstance(self.coeffs[0], Poly):
                return self._wrap([_exact_div(c, other) for c in self.coeffs])
            return self._wrap([_exact_div(c, other) for c in self.coeffs])
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        lc = other.coeffs[-1]
        if len(r) <= db:
            if r:
                raise ArithmeticError("inexact polynomial division")
            return self._wrap([])
        q = [0] * (len(r) - db)
        bc = other.coeffs
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if not c:
                continue
            c = _exact_div(c, lc)
            q[i - db] = c
            for j in range(db):
                if bc[j]:
                    r[i - db + j] = r[i - db + j] - c * bc[j]
        if any(r[:db]):
            raise ArithmeticError("inexact polynomial division")
        return self._wrap(q)

    def pseudo_rem(self, other: Poly) -> Poly:
        """``lc(other)^(deg self - deg other + 1) * self mod other`` without division."""
        db = other.degree
        e = self.degree - db + 1
        if e <= 0:
            return self
        lc = other.coeffs[-1]
        bc = other.coeffs
        r = list(self.coeffs)
        while len(r) - 1 >= db and r:
            c = r[-1]
            k = len(r) - 1 - db
            r = [x * lc for x in r[:-1]]
            for j in range(db):
                if bc[j]:
                    r[k + j] = r[k + j] - c * bc[j]
            e -= 1
            while r and not r[-1]:
                r.pop()
        out = self._wrap(r)
        return out.scale(lc**e) if e and out else out

    def monic(self) -> Poly:
        if not self.coeffs or _is_one(self.coeffs[-1]):
            return self
        return self.scale(_inv(self.coeffs[-1]))

    def deriv(self) -> Poly:
        return self._wrap([c * i for i, c in enumerate(self.coeffs)][1:])

    def map(self, f: Callable) -> Poly:
        return self._wrap([f(c) for c in self.coeffs])

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def compose(self, other: Poly) -> Poly:
        out = self._wrap([])
        for c in reversed(self.coeffs):
            out = out * other + c
        return out

    def reverse(self, w: int | None = None) -> Poly:
        """``var**w * self(1/var)``; ``w`` defaults to the degree."""
        w = self.degree if w is None else w
        if self.degree > w:
            raise ValueError("weight below degree")
        return self._wrap(list(reversed(list(self.coeffs) + [0] * (w - self.degree))))

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def shift(self, k: int) -> Poly:
        """Multiply by ``var**k`` (``k`` may be negative when divisible)."""
        if k >= 0:
            return self._wrap([0] * k + list(self.coeffs))
        if any(self.coeffs[: -k]):
            raise ArithmeticError("shift would drop nonzero terms")
        return self._wrap(list(self.coeffs[-k:]))

    def gcd(self, other: Poly) -> Poly:
        """Monic gcd over a field."""
        a, b = self, other
        while b:
            a, b = b, (a % b).monic()
        return a.monic() if a else a

    def ext_gcd(self, other: Poly) -> tuple[Poly, Poly, Poly]:
        """``(g, s, u)`` with ``s*self + u*other = g`` monic."""
        r0, r1 = self, other
        s0, s1 = self._wrap([1]), self._wrap([])
        u0, u1 = self._wrap([]), self._wrap([1])
        while r1:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            u0, u1 = u1, u0 - q * u1
        if not r0:
            return r0, s0, u0
        k = _inv(r0.lc())
        return r0.scale(k), s0.scale(k), u0.scale(k)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r}, var={self.var!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mon = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            cs = str(c)
            if mon and cs == "1":
                terms.append(mon)
            elif mon:
                terms.append(f"({cs})*{mon}")
            else:
                terms.append(f"({cs})")
        return " + ".join(reversed(terms))

    def to_json(self) -> list:
        return [_scalar_json(c) for c in self.coeffs]


def _scalar_json(c) -> Any:
    if hasattr(c, "to_json"):
        return c.to_json()
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


# --- resultants -------------------------------------------------------------

def resultant(f: Poly, g: Poly):
    """Sylvester resultant by the subresultant PRS (coefficients in a domain)."""
    if not f or not g:
        return 0
    A, B = f, g
    s = 1
    if A.degree < B.degree:
        A, B = B, A
        if A.degree % 2 and B.degree % 2:
            s = -s
    if B.degree == 0:
        return s * B.lc() ** A.degree
    gg: Any = 1
    h: Any = 1
    while True:
        delta = A.degree - B.degree
        if A.degree % 2 and B.degree % 2:
            s = -s
        R = A.pseudo_rem(B)
        A = B
        if not R:
            return 0
        div = gg * h**delta
        B = R.exact_div(div) if not _is_one(div) else R
        gg = A.lc()
        if delta == 0:
            pass
        elif delta == 1:
            h = gg
        else:
            h = _exact_div(gg**delta, h ** (delta - 1))
        if B.degree <= 0:
            break
    dA = A.degree
    if dA == 1:
        hh = B.lc()
    else:
        hh = _exact_div(B.lc() ** dA, h ** (dA - 1))
    return s * hh


def discriminant_x(g: Poly):
    """``(-1)^(d(d-1)/2) res(g, g') / lc(g)`` with ``d = deg g``."""
    d = g.degree
    if d < 2:
        raise ValueError("discriminant needs degree >= 2")
    r = resultant(g, g.deriv())
    r = _exact_div(r, g.lc()) if not _is_one(g.lc()) else r
    return -r if (d * (d - 1) // 2) % 2 else r


def reciprocal_check(c: Poly, w: int) -> bool:
    if c.degree > w:
        return False
    return c.reverse(w) == c


# --- square-free parts and roots ---------------------------------------------

def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm over a field of characteristic 0: monic ``(a_i, i)``."""
    out: list[tuple[Poly, int]] = []
    if f.degree < 1:
        return out
    fp = f.deriv()
    a = f.gcd(fp)
    b = f // a
    c = fp // a
    d = c - b.deriv()
    i = 1
    while b.degree > 0:
        a = b.gcd(d)
        b = b // a
        c = d // a
        if a.degree > 0:
            out.append((a.monic(), i))
        i += 1
        d = c - b.deriv()
    return out


def _sqrt_scalar(x):
    if isinstance(x, QuadNum):
        return quad_sqrt(x)
    x = Fraction(x)
    if x < 0:
        return None
    from math import isqrt
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _split_factor(f: Poly) -> list:
    f = f.monic()
    if f.degree == 1:
        return [-f[0]]
    if f.degree == 2:
        b, c = f[1], f[0]
        disc = b * b - 4 * c
        r = _sqrt_scalar(disc)
        if r is None:
            return [AlgebraicPoint(f)]
        return [(-b + r) / 2, (-b - r) / 2]
    return []


def squarefree_multiple_roots(f: Poly) -> list[tuple[Any, int]]:
    """Roots with multiplicity; irreducible quadratics come back as AlgebraicPoints.

    Factors of degree >= 3 are only tolerated for multiplicity 1 (and then
    skipped); repeated ones raise :class:`UnsplittableFactor`.
    """
    out: list[tuple[Any, int]] = []
    for fac, m in squarefree_decomposition(f):
        if fac.degree >= 3:
            if m > 1:
                raise UnsplittableFactor(f"degree-{fac.degree} factor of multiplicity {m}")
            continue
        for r in _split_factor(fac):
            out.append((r, m))
    return out


# --- algebraic points ---------------------------------------------------------

class AlgebraicPoint:
    """A Galois orbit of points, given by a monic irreducible minimal polynomial."""

    __slots__ = ("minpoly",)

    def __init__(self, minpoly: Poly):
        if minpoly.degree not in (1, 2):
            raise ValueError("AlgebraicPoint supports degree 1 or 2")
        self.minpoly = minpoly.monic()
        if self.minpoly.degree == 2:
            b, c = self.minpoly[1], self.minpoly[0]
            if _sqrt_scalar(b * b - 4 * c) is not None:
                raise ValueError("quadratic minimal polynomial is reducible")

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def conj(self) -> AlgebraicPoint:
        return AlgebraicPoint(self.minpoly.map(lambda c: c.conj() if hasattr(c, "conj") else c))

    def generator(self) -> QuotientElem:
        return QuotientElem(Poly.gen(self.minpoly.var), self)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraicPoint) and self.minpoly == other.minpoly

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __repr__(self) -> str:
        return f"AlgebraicPoint({self.minpoly})"

    def to_json(self) -> dict:
        return {"minpoly": self.minpoly.to_json()}


class QuotientElem:
    """Element of ``K[t]/(minpoly)``, a field since the minimal polynomial is irreducible."""

    __slots__ = ("rep", "pt")

    def __init__(self, rep: Poly, pt: AlgebraicPoint):
        self.pt = pt
        self.rep = rep % pt.minpoly if rep.degree >= pt.degree else rep

    def _lift(self, other) -> QuotientElem:
        if isinstance(other, QuotientElem):
            return other
        if isinstance(other, Poly):
            return QuotientElem(other, self.pt)
        return QuotientElem(Poly.const(other, self.pt.minpoly.var), self.pt)

    def __add__(self, other):
        return QuotientElem(self.rep + self._lift(other).rep, self.pt)

    __radd__ = __add__

    def __neg__(self):
        return QuotientElem(-self.rep, self.pt)

    def __sub__(self, other):
        return QuotientElem(self.rep - self._lift(other).rep, self.pt)

    def __rsub__(self, other):
        return QuotientElem(self._lift(other).rep - self.rep, self.pt)

    def __mul__(self, other):
        return QuotientElem(self.rep * self._lift(other).rep, self.pt)

    __rmul__ = __mul__

    def inverse(self) -> QuotientElem:
        g, s, _ = self.rep.ext_gcd(self.pt.minpoly)
        if g.degree != 0:
            raise PoleAtPoint("element vanishes at the algebraic point")
        return QuotientElem(s, self.pt)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self._lift(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self) -> bool:
        return bool(self.rep)

    def __eq__(self, other) -> bool:
        try:
            o = self._lift(other)
        except Exception:
            return NotImplemented
        return self.rep == o.rep

    def __hash__(self) -> int:
        return hash(self.rep)

    def scalar(self):
        """The value when it lies in the base field, else ValueError."""
        if self.rep.degree > 0:
            raise ValueError("not a base-field element")
        return self.rep[0]

    def __repr__(self) -> str:
        return f"QuotientElem({self.rep} mod {self.pt.minpoly})"


def eval_at_algebraic(f, pt: AlgebraicPoint) -> QuotientElem:
    if isinstance(f, RationalFunction):
        den = QuotientElem(f.den, pt)
        if not den:
            raise PoleAtPoint(f"denominator vanishes on {pt}")
        return QuotientElem(f.num, pt) / den
    return QuotientElem(f, pt)


# --- rational functions -----------------------------------------------------------

class RationalFunction:
    """``num/den`` over a field, with ``den`` monic and coprime to ``num``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced: bool = False):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        var = num.var
        if den is None:
            den = Poly([1], var)
        elif not isinstance(den, Poly):
            den = Poly.const(den, var)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = num, Poly([1], var)
            return
        if not _reduced:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.lc()
        if not _is_one(lc):
            inv = _inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @property
    def var(self) -> str:
        return self.num.var

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly) and other.var == self.var:
            return RationalFunction(other, _reduced=True)
        return RationalFunction(Poly.const(other, self.var), _reduced=True)

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        g = self.den.gcd(o.den)
        if g.degree == 0:
            return RationalFunction(self.num * o.den + o.num * self.den,
                                    self.den * o.den, _reduced=True)
        d1, d2 = self.den // g, o.den // g
        num = self.num * d2 + o.num * d1
        return RationalFunction(num, d1 * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.num or not o.num:
            return RationalFunction(Poly([], self.var))
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n1, d2 = (self.num // g1, o.den // g1) if g1.degree > 0 else (self.num, o.den)
        n2, d1 = (o.num // g2, self.den // g2) if g2.degree > 0 else (o.num, self.den)
        return RationalFunction(n1 * n2, d1 * d2, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction(self.num**e, self.den**e, _reduced=True)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except Exception:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def deriv(self) -> RationalFunction:
        return RationalFunction(self.num.deriv() * self.den - self.num * self.den.deriv(),
                                self.den * self.den)

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise PoleAtPoint(f"pole at {x}")
        return self.num(x) / d

    def map(self, f: Callable) -> RationalFunction:
        return RationalFunction(self.num.map(f), self.den.map(f))

    def conj(self) -> RationalFunction:
        return self.map(lambda c: c.conj() if hasattr(c, "conj") else c)

    def order_at_infinity(self) -> int:
        """``deg den - deg num``; large positive for zero."""
        if not self.num:
            return 10**9
        return self.den.degree - self.num.degree

    def __repr__(self) -> str:
        return f"RationalFunction({self.num} / {self.den})"

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}


# --- truncated series ----------------------------------------------------------

class SeriesPrefix:
    """Power series known modulo ``t^(N+1)``."""

    __slots__ = ("coeffs", "N")

    def __init__(self, coeffs: Iterable, N: int | None = None):
        c = list(coeffs)
        if N is None:
            N = len(c) - 1
        c = c[: N + 1] + [0] * (N + 1 - len(c))
        self.coeffs, self.N = c, N

    def __getitem__(self, i: int):
        return self.coeffs[i]

    def __len__(self) -> int:
        return self.N + 1

    def __add__(self, other: SeriesPrefix) -> SeriesPrefix:
        N = min(self.N, other.N)
        return SeriesPrefix([a + b for a, b in zip(self.coeffs[: N + 1], other.coeffs)], N)

    def __sub__(self, other: SeriesPrefix) -> SeriesPrefix:
        N = min(self.N, other.N)
        return SeriesPrefix([a - b for a, b in zip(self.coeffs[: N + 1], other.coeffs)], N)

    def __mul__(self, other):
        if not isinstance(other, SeriesPrefix):
            return SeriesPrefix([c * other for c in self.coeffs], self.N)
        N = min(self.N, other.N)
        prod = _mul_kara(self.coeffs[: N + 1], other.coeffs[: N + 1])
        return SeriesPrefix(prod[: N + 1], N)

    __rmul__ = __mul__

    def deriv(self) -> SeriesPrefix:
        return SeriesPrefix([c * i for i, c in enumerate(self.coeffs)][1:], self.N - 1)

    def inverse(self) -> SeriesPrefix:
        c0 = self.coeffs[0]
        try:
            inv0 = _inv(c0)
        except ZeroDivisionError as exc:
            raise NonUnitConstantTerm("constant term is not invertible") from exc
        out = [inv0]
        for k in range(1, self.N + 1):
            s = 0
            for j in range(1, k + 1):
                if self.coeffs[j]:
                    s = s + self.coeffs[j] * out[k - j]
            out.append(-s * inv0)
        return SeriesPrefix(out, self.N)

    def compose(self, p: Poly) -> SeriesPrefix:
        """``self(p(t))`` for a polynomial ``p`` with ``p(0) = 0``."""
        if p[0]:
            raise ValueError("inner polynomial must vanish at 0")
        ps = SeriesPrefix(p.coeffs, self.N) if p.degree <= self.N else SeriesPrefix(p.coeffs[: self.N + 1], self.N)
        out = SeriesPrefix([0], self.N)
        for c in reversed(self.coeffs):
            out = out * ps
            out.coeffs[0] = out.coeffs[0] + c
        return out

    def to_poly(self, var: str = "t") -> Poly:
        return Poly(self.coeffs, var)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesPrefix):
            return NotImplemented
        N = min(self.N, other.N)
        return self.N == other.N and all(a == b for a, b in zip(self.coeffs[: N + 1], other.coeffs))

    def __repr__(self) -> str:
        return f"SeriesPrefix({self.coeffs!r}, N={self.N})"

    def to_json(self) -> list:
        return [_scalar_json(c) for c in self.coeffs]
