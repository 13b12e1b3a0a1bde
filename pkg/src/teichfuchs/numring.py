"""Exact scalars: Q, Q(sqrt D), S-integers and truncated p-adic quotients.

Elements of Q(sqrt D) are :class:`QuadNum` values stored as
``(A + B*sqrt(D)) / d`` with integers ``A, B, d``.  Residues of
``O_D / p^n`` live in :class:`PadicQuad`, which models
``(Z/p^n)[s]/(s^2 - D)`` and collapses to ``Z/p^n`` when ``D`` is a
square mod ``p``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Union

__all__ = [
    "BadDenominator",
    "DiscriminantMismatch",
    "NotResidue",
    "PadicQuad",
    "PrimeContext",
    "QuadNum",
    "conj",
    "hensel_sqrt",
    "is_square",
    "legendre",
    "norm",
    "prime_factors",
    "quad_sqrt",
    "reduce_mod",
    "s_integral",
    "squarefree_decompose",
]


class DiscriminantMismatch(ValueError):
    pass


class NotResidue(ValueError):
    pass


class BadDenominator(ZeroDivisionError):
    pass


Rational = Union[int, Fraction]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(E, F)`` with ``n = E * F**2`` and ``E`` square-free (n > 0)."""
    if n <= 0:
        raise ValueError("n must be positive")
    E, F = 1, 1
    m, q = n, 2
    while q * q <= m:
        k = 0
        while m % q == 0:
            m //= q
            k += 1
        F *= q ** (k // 2)
        if k % 2:
            E *= q
        q += 1
    return E * m, F


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``|n|``."""
    n = abs(n)
    out: list[int] = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
        if q > 10**6:
            from sympy import factorint

            out.extend(factorint(n))
            return sorted(set(out))
    if n > 1:
        out.append(n)
    return out


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class QuadNum:
    """An element ``a + b*sqrt(D)`` of Q(sqrt D), D a positive non-square."""

    __slots__ = ("_A", "_B", "_d", "D")

    def __init__(self, a: Rational = 0, b: Rational = 0, D: int = 0):
        if D <= 0 or is_square(D):
            raise ValueError(f"D must be a positive non-square, got {D}")
        a, b = Fraction(a), Fraction(b)
        d = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        self._set(a.numerator * (d // a.denominator), b.numerator * (d // b.denominator), d, D)

    def _set(self, A: int, B: int, d: int, D: int) -> None:
        if d < 0:
            A, B, d = -A, -B, -d
        g = gcd(gcd(A, B), d)
        if g > 1:
            A //= g
            B //= g
            d //= g
        self._A, self._B, self._d, self.D = A, B, d, D

    @classmethod
    def _raw(cls, A: int, B: int, d: int, D: int) -> QuadNum:
        obj = cls.__new__(cls)
        obj._set(A, B, d, D)
        return obj

    @classmethod
    def sqrt_d(cls, D: int) -> QuadNum:
        return cls._raw(0, 1, 1, D)

    @property
    def a(self) -> Fraction:
        return Fraction(self._A, self._d)

    @property
    def b(self) -> Fraction:
        return Fraction(self._B, self._d)

    def parts(self) -> tuple[int, int, int]:
        """``(A, B, d)`` with ``self == (A + B*sqrt(D))/d`` in lowest terms."""
        return self._A, self._B, self._d

    def is_rational(self) -> bool:
        return self._B == 0

    def __bool__(self) -> bool:
        return self._A != 0 or self._B != 0

    def _coerce(self, other) -> QuadNum | None:
        if isinstance(other, QuadNum):
            if other.D != self.D:
                raise DiscriminantMismatch(f"Q(sqrt {self.D}) vs Q(sqrt {other.D})")
            return other
        if isinstance(other, int):
            return QuadNum._raw(other, 0, 1, self.D)
        if isinstance(other, Fraction):
            return QuadNum._raw(other.numerator, 0, other.denominator, self.D)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return QuadNum._raw(self._A + o._A, self._B + o._B, self._d, self.D)
        return QuadNum._raw(self._A * o._d + o._A * self._d,
                            self._B * o._d + o._B * self._d, self._d * o._d, self.D)

    __radd__ = __add__

    def __neg__(self) -> QuadNum:
        return QuadNum._raw(-self._A, -self._B, self._d, self.D)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadNum._raw(self._A * other, self._B * other, self._d, self.D)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        A1, B1, A2, B2 = self._A, self._B, o._A, o._B
        return QuadNum._raw(A1 * A2 + self.D * B1 * B2, A1 * B2 + A2 * B1,
                            self._d * o._d, self.D)

    __rmul__ = __mul__

    def inverse(self) -> QuadNum:
        n = self._A * self._A - self.D * self._B * self._B
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt D)")
        return QuadNum._raw(self._A * self._d, -self._B * self._d, n, self.D)

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt D)")
            return QuadNum._raw(self._A, self._B, self._d * other, self.D)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> QuadNum:
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadNum._raw(1, 0, 1, self.D)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadNum):
            return (self.D == other.D and self._A == other._A
                    and self._B == other._B and self._d == other._d)
        if isinstance(other, (int, Fraction)):
            return self._B == 0 and Fraction(self._A, self._d) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._B == 0:
            return hash(Fraction(self._A, self._d))
        return hash((self._A, self._B, self._d, self.D))

    def conj(self) -> QuadNum:
        return QuadNum._raw(self._A, -self._B, self._d, self.D)

    def norm(self) -> Fraction:
        return Fraction(self._A * self._A - self.D * self._B * self._B, self._d * self._d)

    def trace(self) -> Fraction:
        return Fraction(2 * self._A, self._d)

    def __repr__(self) -> str:
        return f"QuadNum({self.a}, {self.b}, D={self.D})"

    def __str__(self) -> str:
        if self._B == 0:
            return str(self.a)
        num = f"{self._A}{self._B:+d}*sqrt({self.D})" if self._A else f"{self._B}*sqrt({self.D})"
        return num if self._d == 1 else f"({num})/{self._d}"

    def to_json(self) -> dict:
        return {"a": _frac_str(self.a), "b": _frac_str(self.b), "D": self.D}

    @classmethod
    def from_json(cls, obj: dict) -> QuadNum:
        return cls(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["D"]))


def conj(x: QuadNum) -> QuadNum:
    return x.conj()


def norm(x: QuadNum) -> Fraction:
    return x.norm()


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    if is_square(n) and is_square(d):
        return Fraction(isqrt(n), isqrt(d))
    return None


def quad_sqrt(x: QuadNum) -> QuadNum | None:
    """A square root of ``x`` inside Q(sqrt D), or None if there is none."""
    D = x.D
    if not x:
        return x
    a, b = x.a, x.b
    if b == 0:
        r = _rational_sqrt(a)
        if r is not None:
            return QuadNum(r, 0, D)
        r = _rational_sqrt(a / D)
        return QuadNum(0, r, D) if r is not None else None
    n = _rational_sqrt(x.norm())
    if n is None:
        return None
    for cand in ((a + n) / 2, (a - n) / 2):
        u = _rational_sqrt(cand)
        if u:
            y = QuadNum(u, b / (2 * u), D)
            if y * y == x:
                return y
    return None


# --- primes -----------------------------------------------------------------

def legendre(D: int, p: int) -> int:
    """Quadratic residue symbol (D/p) for an odd prime p."""
    if p == 2 or p < 2:
        raise ValueError("p must be an odd prime")
    r = pow(D % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _sqrt_mod_prime(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def hensel_sqrt(D: int, p: int, n: int) -> int:
    """Square root of D mod p^n lifting the smaller of the two roots mod p."""
    if legendre(D, p) != 1:
        raise NotResidue(f"{D} is not a nonzero square mod {p}")
    r = _sqrt_mod_prime(D, p)
    r = min(r, p - r)
    pk = p
    for _ in range(1, n):
        pk *= p
        r = (r - (r * r - D) * pow(2 * r, -1, pk)) % pk
    return r % p**n


class PrimeContext:
    """Reduction data for a prime ``p`` not dividing ``2D``, precision ``p^n``."""

    __slots__ = ("p", "n", "D", "k", "modulus", "sqrtD_rep")

    def __init__(self, D: int, p: int, n: int = 1):
        if p == 2:
            raise ValueError("p = 2 is not supported in p-adic contexts")
        if n < 1:
            raise ValueError("precision must be >= 1")
        if D % p == 0:
            raise ValueError(f"p={p} divides D={D}")
        self.p, self.n, self.D = p, n, D
        self.modulus = p**n
        if legendre(D, p) == 1:
            self.k = 1
            self.sqrtD_rep: int | str = hensel_sqrt(D, p, n)
        else:
            self.k = 2
            self.sqrtD_rep = "adjoined"

    def with_precision(self, n: int) -> PrimeContext:
        return PrimeContext(self.D, self.p, n)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PrimeContext) and
                (self.D, self.p, self.n) == (other.D, other.p, other.n))

    def __hash__(self) -> int:
        return hash((self.D, self.p, self.n))

    def __repr__(self) -> str:
        return f"PrimeContext(D={self.D}, p={self.p}, n={self.n}, k={self.k})"

    def element(self, c0: int, c1: int = 0) -> PadicQuad:
        return PadicQuad(self, c0, c1)

    def zero(self) -> PadicQuad:
        return PadicQuad(self, 0, 0)

    def one(self) -> PadicQuad:
        return PadicQuad(self, 1, 0)


class PadicQuad:
    """Residue ``c0 + c1*s`` in ``O_D/p^n``; ``c1 == 0`` in the split case."""

    __slots__ = ("ctx", "c0", "c1")

    def __init__(self, ctx: PrimeContext, c0: int, c1: int = 0):
        m = ctx.modulus
        if ctx.k == 1 and c1:
            c0 += c1 * ctx.sqrtD_rep
            c1 = 0
        self.ctx, self.c0, self.c1 = ctx, c0 % m, c1 % m

    def _coerce(self, other) -> PadicQuad | None:
        if isinstance(other, PadicQuad):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise DiscriminantMismatch(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, int):
            return PadicQuad(self.ctx, other, 0)
        if isinstance(other, Fraction):
            m = self.ctx.modulus
            if other.denominator % self.ctx.p == 0:
                raise BadDenominator(f"{other} not integral at {self.ctx.p}")
            return PadicQuad(self.ctx, other.numerator * pow(other.denominator, -1, m), 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PadicQuad(self.ctx, self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __neg__(self) -> PadicQuad:
        return PadicQuad(self.ctx, -self.c0, -self.c1)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PadicQuad(self.ctx, self.c0 - o.c0, self.c1 - o.c1)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int):
            return PadicQuad(self.ctx, self.c0 * other, self.c1 * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.ctx.k == 1:
            return PadicQuad(self.ctx, self.c0 * o.c0, 0)
        return PadicQuad(self.ctx, self.c0 * o.c0 + self.ctx.D * self.c1 * o.c1,
                         self.c0 * o.c1 + self.c1 * o.c0)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        p = self.ctx.p
        return (self.c0 * self.c0 - self.ctx.D * self.c1 * self.c1) % p != 0

    def inverse(self) -> PadicQuad:
        m = self.ctx.modulus
        nrm = (self.c0 * self.c0 - self.ctx.D * self.c1 * self.c1) % m
        if nrm % self.ctx.p == 0:
            raise ZeroDivisionError(f"{self} is not a unit mod {self.ctx.p}")
        inv = pow(nrm, -1, m)
        return PadicQuad(self.ctx, self.c0 * inv, -self.c1 * inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> PadicQuad:
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.c0 or self.c1)

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, PadicQuad) else other
        if o is None:
            return NotImplemented
        return self.ctx == o.ctx and self.c0 == o.c0 and self.c1 == o.c1

    def __hash__(self) -> int:
        return hash((self.c0, self.c1, self.ctx))

    def valuation(self) -> int:
        """p-adic valuation, capped at the precision n."""
        v, p, x, y = 0, self.ctx.p, self.c0, self.c1
        while v < self.ctx.n and x % p == 0 and y % p == 0:
            x //= p
            y //= p
            v += 1
        return v

    def __repr__(self) -> str:
        if self.ctx.k == 1:
            return f"PadicQuad({self.c0} mod {self.ctx.p}^{self.ctx.n})"
        return f"PadicQuad({self.c0}+{self.c1}s mod {self.ctx.p}^{self.ctx.n})"

    def to_json(self) -> dict:
        c = self.ctx
        return {"p": c.p, "n": c.n, "k": c.k, "c0": str(self.c0), "c1": str(self.c1)}

    @classmethod
    def from_json(cls, obj: dict, D: int) -> PadicQuad:
        ctx = PrimeContext(D, int(obj["p"]), int(obj["n"]))
        return cls(ctx, int(obj["c0"]), int(obj["c1"]))


def reduce_mod(x, ctx: PrimeContext) -> PadicQuad:
    """Image of ``x`` (QuadNum, int or Fraction) in ``O_D / p^n``."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        if x.denominator % ctx.p == 0:
            raise BadDenominator(f"{x} has {ctx.p} in its denominator")
        return PadicQuad(ctx, x.numerator * pow(x.denominator, -1, ctx.modulus))
    if x.D != ctx.D:
        raise DiscriminantMismatch(f"{x.D} vs context D={ctx.D}")
    A, B, d = x.parts()
    if d % ctx.p == 0:
        raise BadDenominator(f"{x} has {ctx.p} in its denominator")
    inv = pow(d, -1, ctx.modulus)
    return PadicQuad(ctx, A * inv, B * inv)


def s_integral(x, S: Iterable[int]) -> bool:
    """True iff ``x`` lies in ``O_D[1/S]``.

    ``O_D = Z[(D + sqrt D)/2]`` and ``a + b sqrt D = (a - bD) + 2b (D + sqrt D)/2``,
    so the check is on the denominators of ``2b`` and ``a - bD``.
    """
    S = set(S)
    if isinstance(x, (int, Fraction)):
        dens = [Fraction(x).denominator]
    else:
        dens = [(2 * x.b).denominator, (x.a - x.b * x.D).denominator]
    for den in dens:
        for q in S:
            while den % q == 0:
                den //= q
        if den != 1:
            return False
    return True
