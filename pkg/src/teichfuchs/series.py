"""Frobenius solutions at t = 0 and their S-integrality."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .numring import s_integral, prime_factors
from .picardfuchs import FuchsOp, gauge_transform, local_exponents
from .polyalg import Poly, RationalFunction, SeriesPrefix

__all__ = [
    "ExponentNormalization",
    "Recursion",
    "SolutionReport",
    "annihilation_defect",
    "boundary_identities",
    "build_recursion",
    "holomorphic_solution",
    "integrality_report",
    "normalize_at_zero",
]


class ExponentNormalization(ValueError):
    pass


def _falling(j: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= j - i
    return out


@dataclass
class Recursion:
    """``sum_s D_s(j) u_(j-s) = 0`` for offsets ``s = -1 .. order-1``.

    ``bands[s + 1]`` lists ``(d, p_(d, s+d))``: ``D_s(j) = sum_d p_(d,s+d) (j - s)_d``
    with the falling factorial.  ``M`` is the product of the nonzero finite
    singularities and ``sign`` the sign in ``D_(-1)(j) = sign * M * (j+1)^2``.
    """

    bands: list[list[tuple[int, object]]]
    M: object
    sign: int
    gamma: Fraction | None = None

    @property
    def order(self) -> int:
        return len(self.bands) - 1

    def offsets(self) -> range:
        return range(-1, len(self.bands) - 1)

    def coeff(self, j: int, s: int):
        acc = 0
        for d, c in self.bands[s + 1]:
            acc = acc + c * _falling(j - s, d)
        return acc

    def coeff_poly(self, s: int) -> Poly:
        """``D_s`` as a polynomial in ``j`` (variable ``j``)."""
        jv = Poly.gen("j")
        out = Poly([], "j")
        base = jv - s
        for d, c in self.bands[s + 1]:
            ff = Poly([1], "j")
            for i in range(d):
                ff = ff * (base - i)
            out = out + ff.scale(c)
        return out

    def map(self, f) -> Recursion:
        return Recursion([[(d, f(c)) for d, c in b] for b in self.bands], f(self.M), self.sign, self.gamma)


@dataclass
class SolutionReport:
    prefix: SeriesPrefix
    S_used: tuple[int, ...]
    max_checked: int
    violations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def denominator_primes(self) -> set[int]:
        out: set[int] = set()
        for c in self.prefix.coeffs:
            out |= _den_primes(c)
        return out

    def to_json(self, with_prefix: bool = False) -> dict:
        out = {
            "S": list(self.S_used),
            "N": self.max_checked,
            "ok": self.ok,
            "violations": [list(v) for v in self.violations],
            "denominator_primes": sorted(self.denominator_primes()),
        }
        if with_prefix:
            out["prefix"] = [c.to_json() if hasattr(c, "to_json") else str(c) for c in self.prefix.coeffs]
        return out


def _den_primes(c) -> set[int]:
    if hasattr(c, "parts"):
        A, B, d = c.parts()
        den = d
    else:
        den = Fraction(c).denominator
    return set(prime_factors(den)) if den > 1 else set()


def _cleared(L: FuchsOp) -> tuple[Poly, Poly, Poly]:
    return L.cleared()


def build_recursion(L: FuchsOp, *, check: bool = True) -> Recursion:
    """Band recursion of the cleared operator ``P2 D^2 + P1 D + P0``."""
    ex = local_exponents(L, 0)
    if ex != (0, 0):
        raise ExponentNormalization(f"exponents at t=0 are {ex}, expected (0, 0)")
    P2, P1, P0 = _cleared(L)
    P = [P0, P1, P2]
    lo = -1
    hi = max(P[d].degree - d for d in range(3))
    bands = []
    for s in range(lo, hi + 1):
        band = []
        for d in range(3):
            c = P[d][s + d] if s + d >= 0 else 0
            if c:
                band.append((d, c))
        bands.append(band)
    for d in range(3):
        for k in range(0, d - 1):
            if P[d][k]:
                raise ExponentNormalization("pole of order > 1 in the cleared operator at 0")
    M = P2[1]
    sign = 1
    if hasattr(M, "is_rational") and M.is_rational() and M.a < 0:
        M, sign = -M, -1
    elif isinstance(M, (int, Fraction)) and M < 0:
        M, sign = -M, -1
    gamma = None
    try:
        gi = local_exponents(L, "inf")
        if gi[0] == gi[1]:
            gamma = gi[0]
    except ArithmeticError:
        pass
    rec = Recursion(bands, M, sign, gamma)
    if check:
        _check_boundaries(rec, 8)
    return rec


def _check_boundaries(rec: Recursion, jmax: int) -> None:
    top = rec.order - 1
    for j in range(jmax):
        if rec.coeff(j, -1) != rec.sign * rec.M * (j + 1) ** 2:
            raise ExponentNormalization(f"leading band differs from +-M (j+1)^2 at j={j}")
        if rec.gamma is not None and rec.coeff(j, top) != (j + rec.gamma - top) ** 2:
            raise ExponentNormalization(f"trailing band differs from (j+gamma-r+3)^2 at j={j}")


def boundary_identities(rec: Recursion, jmax: int) -> bool:
    try:
        _check_boundaries(rec, jmax)
    except ExponentNormalization:
        return False
    return True


def holomorphic_solution(L: FuchsOp | Recursion, N: int) -> SeriesPrefix:
    """The solution with ``u_0 = 1`` up to ``t^N``."""
    rec = L if isinstance(L, Recursion) else build_recursion(L)
    u: list = [1]
    offs = [s for s in rec.offsets() if s >= 0]
    for j in range(N):
        acc = 0
        for s in offs:
            if j - s < 0:
                break
            acc = acc + rec.coeff(j, s) * u[j - s]
        lead = rec.coeff(j, -1)
        u.append(-acc / lead)
    return SeriesPrefix(u, N)


def integrality_report(L: FuchsOp, S: Iterable[int], N: int) -> SolutionReport:
    S = tuple(sorted(set(S)))
    pref = holomorphic_solution(L, N)
    viol = []
    for j, c in enumerate(pref.coeffs):
        if not s_integral(c, S):
            bad = sorted(_den_primes(c) - set(S))
            viol.append((j, bad[0] if bad else 0))
    return SolutionReport(pref, S, N, viol)


def normalize_at_zero(L: FuchsOp) -> FuchsOp:
    """Gauge by ``t^(-rho)`` when the exponents at 0 are ``(rho, rho)``."""
    a, b = local_exponents(L, 0)
    if a != b:
        raise ExponentNormalization(f"exponents {a}, {b} at 0 are not a double root")
    if a == 0:
        return L
    if a.denominator != 1:
        raise ExponentNormalization("non-integral exponent cannot be removed by a rational gauge")
    t = Poly.gen(L.A.var)
    k = int(a)
    f = RationalFunction(t ** (-k)) if k < 0 else RationalFunction(Poly([1], L.A.var), t**k)
    return gauge_transform(L, f)


def annihilation_defect(L: FuchsOp, u: SeriesPrefix) -> SeriesPrefix:
    """``P2 u'' + P1 u' + P0 u`` truncated to degree ``N - 2``."""
    P2, P1, P0 = _cleared(L)
    N = u.N
    d1 = u.deriv()
    d2 = d1.deriv()

    def mul(p: Poly, s: SeriesPrefix) -> list:
        out = [0] * (s.N + 1)
        for i, c in enumerate(p.coeffs):
            if not c:
                continue
            for k in range(0, s.N + 1 - i):
                out[i + k] = out[i + k] + c * s.coeffs[k]
        return out

    a, b, c = mul(P2, d2), mul(P1, d1), mul(P0, u)
    m = N - 2
    return SeriesPrefix([a[k] + b[k] + c[k] for k in range(m + 1)], m)
