"""Splitting prototypes, spin, cusp normal forms and related invariants."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .numring import QuadNum, is_square, squarefree_decompose
from .polyalg import Poly

__all__ = [
    "BadDiscriminant",
    "CuspNormalForm",
    "NotApplicable",
    "Prototype",
    "StratumConstants",
    "component_label",
    "cyclotomic",
    "enumerate_prototypes",
    "fundamental_discriminant",
    "galois_spin_swap_certificate",
    "normal_form",
    "real_cyclotomic_minpoly",
    "spin",
    "stratum_constants",
    "triangle_obstruction",
]

STRATA = {"OmegaM2(2)": Fraction(1, 3), "OmegaM2(1,1)": Fraction(1, 2)}


class BadDiscriminant(ValueError):
    pass


class NotApplicable(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Prototype:
    a: int
    b: int
    c: int
    e: int

    @property
    def D(self) -> int:
        return self.e * self.e + 4 * self.b * self.c

    def is_valid(self) -> bool:
        a, b, c, e = self.a, self.b, self.c, self.e
        return (b > 0 and c > 0 and 0 <= a < gcd(b, c) and c + e < b
                and gcd(gcd(a, b), gcd(c, e)) == 1)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.e)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "e": self.e, "D": self.D}


def enumerate_prototypes(D: int) -> list[Prototype]:
    """All splitting prototypes of discriminant ``D``, sorted by ``(e, b, c, a)``."""
    if D <= 4:
        raise BadDiscriminant(f"W_D empty for D <= 4 (got D={D})")
    if D % 4 not in (0, 1) or is_square(D):
        raise BadDiscriminant(f"D={D} is not a non-square discriminant")
    out = []
    r = isqrt(D)
    for e in range(-r, r + 1):
        if (e - D) % 2 or e * e >= D:
            continue
        bc = (D - e * e) // 4
        for b in range(1, bc + 1):
            if bc % b:
                continue
            c = bc // b
            if c + e >= b:
                continue
            for a in range(gcd(b, c)):
                pt = Prototype(a, b, c, e)
                if pt.is_valid():
                    out.append(pt)
    out.sort(key=lambda q: (q.e, q.b, q.c, q.a))
    return out


def spin(pt: Prototype) -> int:
    """Raw value of the spin formula ``(e - F)/2 + (c + 1)(a + b + ab)`` mod 2."""
    _, F = squarefree_decompose(pt.D)
    return ((pt.e - F) // 2 + (pt.c + 1) * (pt.a + pt.b + pt.a * pt.b)) % 2


def component_label(pt: Prototype) -> int:
    """Component index used by :mod:`teichfuchs.families`.

    Matching cusp fibers shows that the raw spin value already labels the
    ``+sqrt(17)`` model as component 1, so the label is the raw value.
    """
    return spin(pt)


def separates_components(D: int) -> bool:
    return D % 8 == 1 and not is_square(D)


@dataclass(frozen=True)
class CuspNormalForm:
    prototype: Prototype
    lam: QuadNum
    mu: QuadNum
    lambda_sq: QuadNum
    b_sq: int
    quintic: Poly
    convention: str = "eigenform"

    @property
    def shift(self) -> QuadNum:
        """The simple finite root of the quintic."""
        return -self.mu if self.convention == "eigenform" else self.mu

    def roots(self) -> list[tuple[QuadNum, int]]:
        r = self.shift
        return [(r, 1), (r + self.b_sq, 2), (r + self.lambda_sq, 2)]

    def to_json(self) -> dict:
        return {
            "prototype": self.prototype.to_json(),
            "mu": self.mu.to_json(),
            "lambda_sq": self.lambda_sq.to_json(),
            "b_sq": self.b_sq,
            "quintic": self.quintic.to_json(),
        }


def normal_form(pt: Prototype, convention: str = "eigenform") -> CuspNormalForm:
    """Cusp fiber ``y^2 = (x - r)(x - r - b^2)^2 (x - r - lambda^2)^2``.

    ``mu = lambda b (b + c)/sqrt(D)``.  With ``convention="eigenform"`` the
    simple root is ``r = -mu``: from ``x' = z^2`` the form ``(x' - mu) dx'/y``
    becomes ``x dx/y`` exactly for ``x = x' - mu``.  ``convention="plus"`` uses
    ``r = +mu`` instead.
    """
    if convention not in ("eigenform", "plus"):
        raise ValueError(f"unknown convention {convention!r}")
    D = pt.D
    s = QuadNum.sqrt_d(D)
    lam = (pt.e + s) / 2
    mu = lam * (pt.b * (pt.b + pt.c)) / s
    lsq = lam * lam
    b2 = pt.b * pt.b
    r = -mu if convention == "eigenform" else mu
    x = Poly.gen("x")
    quintic = (x - r) * (x - (r + b2)) ** 2 * (x - (r + lsq)) ** 2
    return CuspNormalForm(pt, lam, mu, lsq, b2, quintic, convention)


def mu_general(pt: Prototype) -> QuadNum:
    """``mu = lambda (lambda conj(lambda) - b^2) / (conj(lambda) - lambda)``."""
    s = QuadNum.sqrt_d(pt.D)
    lam = (pt.e + s) / 2
    return lam * (lam * lam.conj() - pt.b * pt.b) / (lam.conj() - lam)


@dataclass
class GaloisCertificate:
    D: int
    lambda_sq_swapped: bool
    mu_swapped: bool
    mu_ratio: QuadNum
    lambda_ratio: QuadNum
    mu_ratio_expected: QuadNum
    lambda_ratio_expected: QuadNum
    spins: tuple[int, int]

    @property
    def passes(self) -> bool:
        return (self.lambda_sq_swapped and self.mu_swapped
                and self.mu_ratio == self.mu_ratio_expected
                and self.lambda_ratio == self.lambda_ratio_expected
                and self.mu_ratio != self.lambda_ratio
                and self.spins[0] != self.spins[1])

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "passes": self.passes,
            "lambda_sq_swapped": self.lambda_sq_swapped,
            "mu_swapped": self.mu_swapped,
            "mu_ratio": self.mu_ratio.to_json(),
            "lambda_ratio": self.lambda_ratio.to_json(),
            "spins": list(self.spins),
        }


def galois_spin_swap_certificate(D: int) -> GaloisCertificate:
    """Check that conjugation swaps the cusps (0,(D-1)/4,1,+-1) but no scaling identifies them.

    ``mu_1/mu_{-1} = lambda_1/lambda_{-1} = (1+sqrt D)^2/(D-1)`` whereas
    ``lambda_1^2/b^2 = 4(1+sqrt D)^2/(D-1)^2``; the two differ for every D > 5.
    """
    if is_square(D) or D % 8 != 1:
        raise NotApplicable(f"D={D} needs D = 1 mod 8 and non-square")
    b = (D - 1) // 4
    p_plus, p_minus = Prototype(0, b, 1, 1), Prototype(0, b, 1, -1)
    nf_p, nf_m = normal_form(p_plus), normal_form(p_minus)
    s = QuadNum.sqrt_d(D)
    return GaloisCertificate(
        D=D,
        lambda_sq_swapped=nf_p.lambda_sq.conj() == nf_m.lambda_sq,
        mu_swapped=nf_p.mu.conj() == nf_m.mu,
        mu_ratio=nf_p.mu / nf_m.mu,
        lambda_ratio=nf_p.lambda_sq / (b * b),
        mu_ratio_expected=(1 + s) ** 2 / (D - 1),
        lambda_ratio_expected=4 * (1 + s) ** 2 / ((D - 1) ** 2),
        spins=(spin(p_plus), spin(p_minus)),
    )


@dataclass(frozen=True)
class StratumConstants:
    stratum: str
    lyapunov: tuple[int, Fraction]
    r1: int
    gamma1: Fraction
    gamma2: Fraction
    M1: QuadNum | None = field(default=None)
    M2: QuadNum | None = field(default=None)


def stratum_constants(stratum: str, r1: int, M1=None, M2=None) -> StratumConstants:
    if stratum not in STRATA:
        raise ValueError(f"unknown stratum {stratum!r}; expected one of {sorted(STRATA)}")
    if r1 < 3:
        raise ValueError("need at least three cusps")
    lam2 = STRATA[stratum]
    g1 = Fraction(r1 - 2, 2)
    return StratumConstants(stratum, (1, lam2), r1, g1, lam2 * g1, M1, M2)


# --- trace fields of triangle groups -----------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Poly:
    """The n-th cyclotomic polynomial over Z, by exact division."""
    num = Poly([-1] + [0] * (n - 1) + [1], "z")
    for d in range(1, n):
        if n % d == 0:
            num = num.exact_div(cyclotomic(d))
    return num


def real_cyclotomic_minpoly(n: int) -> Poly:
    """Minimal polynomial of ``zeta_n + 1/zeta_n`` over Q (variable ``w``)."""
    if n <= 2:
        return Poly([-2 if n == 1 else 2, 1], "w")
    phi = cyclotomic(n)
    k = phi.degree // 2
    rem = list(phi.coeffs)
    out = [0] * (k + 1)
    for j in range(k, -1, -1):
        c = rem[k + j]
        out[j] = c
        if c:
            # subtract c * z^(k-j) * (z^2 + 1)^j
            sub = (Poly([1, 0, 1], "z") ** j).shift(k - j)
            for i, v in enumerate(sub.coeffs):
                rem[i] -= c * v
    if any(rem):
        raise ArithmeticError("cyclotomic polynomial is not palindromic")
    return Poly(out, "w")


def fundamental_discriminant(D: int) -> int:
    E, _ = squarefree_decompose(D)
    return E if E % 4 == 1 else 4 * E


def _quadratic_subfield(n: int) -> int | None:
    """Square-free E with Q(zeta_n + 1/zeta_n) = Q(sqrt E), 1 for Q, None if degree > 2."""
    psi = real_cyclotomic_minpoly(n)
    if psi.degree == 1:
        return 1
    if psi.degree != 2:
        return None
    b, c = psi[1], psi[0]
    disc = b * b - 4 * c
    E, _ = squarefree_decompose(disc)
    return E


def triangle_obstruction(D: int, nmax: int = 60) -> bool:
    """True iff Q(sqrt D) is the trace field of some Delta(n, m, infinity).

    The field generated by ``zeta_n + 1/zeta_n`` and ``zeta_m + 1/zeta_m`` must
    equal Q(sqrt D); only real cyclotomic subfields of degree <= 2 can occur.
    """
    E, _ = squarefree_decompose(D)
    fields = set()
    for n in range(1, nmax + 1):
        q = _quadratic_subfield(n)
        if q is not None:
            fields.add(q)
    # a compositum of two fields from ``fields`` is quadratic only if one is Q
    return E in fields and E != 1
