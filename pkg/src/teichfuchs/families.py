"""The explicit universal families over W_13 and W_17^eps and their arithmetic."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .numring import QuadNum, prime_factors
from .polyalg import (AlgebraicPoint, Poly, QuotientElem, discriminant_x,
                      reciprocal_check, squarefree_decomposition)
from .teich import Prototype, component_label, enumerate_prototypes, normal_form

__all__ = [
    "CongruenceFails",
    "DiscriminantReport",
    "FamilyModel",
    "NoMatch",
    "ReductionReport",
    "UnsupportedDiscriminant",
    "collision_norms",
    "cusp_j_invariant",
    "discriminant_report",
    "family",
    "fiber",
    "good_reduction",
    "match_cusps",
    "match_normal_form",
    "potentially_good_at_D",
    "structural_checks",
]


class UnsupportedDiscriminant(ValueError):
    pass


class NoMatch(ValueError):
    pass


class CongruenceFails(ArithmeticError):
    pass


INF = "inf"


def _qpoly(D: int, pairs: list[tuple[int, int]], den: int = 1) -> Poly:
    """Poly in t from ``(rational part, sqrt part)`` integer pairs, constant term first."""
    return Poly([QuadNum(Fraction(a, den), Fraction(b, den), D) for a, b in pairs], "t")


def _raw_c17() -> list[Poly]:
    D = 17
    c0 = [(1755475, 425765), (-5289173, -1282803), (3533762, 857038),
          (3533762, 857038), (-5289173, -1282803), (1755475, 425765)]
    c1 = [(331187, 80325), (-1281964, -310964), (1901714, 461278),
          (-1281964, -310964), (331187, 80325)]
    # the constant term is forced by the t -> 1/t symmetry of c2
    c2 = [(-15783, -3825), (15687, 3825), (15687, 3825), (-15783, -3825)]
    c3 = [(-4551, -1105), (8918, 2210), (-4551, -1105)]
    return [_qpoly(D, c0), _qpoly(D, c1, 2), _qpoly(D, c2, 4), _qpoly(D, c3, 8),
            _qpoly(D, [(3, 0), (3, 0)]), _qpoly(D, [(1, 0)])]


def _raw_c13() -> list[Poly]:
    D = 13
    c0 = [(5717606400, -1585778688), (-17158488768, 4758908544),
          (11440882287, -3173129856), (11440882287, -3173129856),
          (-17158488768, 4758908544), (5717606400, -1585778688)]
    c1 = [(114041088, -31629312), (-448550784, 124405632), (669019797, -185552640),
          (-448550784, 124405632), (114041088, -31629312)]
    c2 = [(-27000, 7488), (26991, -7488), (26991, -7488), (-27000, 7488)]
    c3 = [(-14992, 4160), (30011, -8320), (-14992, 4160)]
    return [_qpoly(D, c0, 2**15), _qpoly(D, c1, 2**12), _qpoly(D, c2, 2**5),
            _qpoly(D, c3, 2**6), _qpoly(D, [(1, 0), (1, 0)]), _qpoly(D, [(1, 0)])]


def _conj_poly(p: Poly) -> Poly:
    return p.map(lambda c: c.conj())


@dataclass(frozen=True)
class FamilyModel:
    D: int
    eps: int
    c: tuple[Poly, ...]
    cusps: tuple
    cusp_quadratic: Poly
    S_exceptional: frozenset[int]
    disc_unit_printed: QuadNum
    disc_exponents: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def sqrt_d(self) -> QuadNum:
        return QuadNum.sqrt_d(self.D)

    def g(self) -> Poly:
        """The quintic as a Poly in ``x`` with Poly-in-``t`` coefficients."""
        return Poly(self.c, "x")

    def g_t(self, order: int = 1) -> Poly:
        cs = list(self.c)
        for _ in range(order):
            cs = [c.deriv() for c in cs]
        return Poly(cs, "x")

    def finite_cusps(self) -> list:
        return [c for c in self.cusps if c != INF]

    def conj(self) -> FamilyModel:
        if self.D != 17:
            return self
        return family(17, 1 - self.eps)

    def key(self) -> str:
        return f"X({self.D})" if self.D == 13 else f"X({self.D})^{self.eps}"

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "eps": self.eps,
            "c": [ck.to_json() for ck in self.c],
            "cusps": [_point_json(p) for p in self.cusps],
            "S_exceptional": sorted(self.S_exceptional),
        }


def _point_json(p) -> Any:
    if p == INF:
        return "inf"
    if isinstance(p, int):
        return p
    return p.to_json()


@lru_cache(maxsize=None)
def family(D: int, eps: int = 1) -> FamilyModel:
    if D == 17:
        if eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        c = _raw_c17()
        s = QuadNum.sqrt_d(17)
        tau = (31 - 7 * s) / 2
        unit = (-(Fraction(17**10, 2**12)) * (4 + s) ** 19 * ((5 + s) / 2)
                * ((5 - s) / 2) ** 18 * 128**3)
        if eps == 0:
            c = [_conj_poly(p) for p in c]
            tau, unit = tau.conj(), unit.conj()
        quad = Poly([1, -(tau + 1 / tau), 1], "t")
        return FamilyModel(17, eps, tuple(c), (0, 1, INF, tau, 1 / tau), quad,
                           frozenset({2, 17}), unit,
                           {"0": 5, "1": 4, "cusp_factor": 3})
    if D == 13:
        s = QuadNum.sqrt_d(13)
        quad = Poly([1, 71 * s / 128, 1], "t")
        unit = (-(Fraction(3**12 * 13**10, 2**60)) * ((-3 + s) / 2) ** 30
                * ((1 + s) / 2) ** 6 * 128**4)
        return FamilyModel(13, 1, tuple(_raw_c13()), (0, 1, INF, AlgebraicPoint(quad)), quad,
                           frozenset({2, 3, 13}), unit,
                           {"0": 4, "1": 4, "cusp_factor": 4})
    raise UnsupportedDiscriminant(f"no explicit family for D={D}")


def structural_checks(fm: FamilyModel) -> dict[str, bool]:
    return {
        "c5_is_one": fm.c[5] == 1,
        "degrees": all(fm.c[k].degree == 5 - k for k in range(6)),
        "reciprocal": all(reciprocal_check(fm.c[k], 5 - k) for k in range(6)),
    }


def fiber(fm: FamilyModel, t0) -> Poly:
    """``g(x, t0)``; an AlgebraicPoint yields coefficients in its residue field."""
    if isinstance(t0, AlgebraicPoint):
        return Poly([QuotientElem(ck, t0) for ck in fm.c], "x")
    return Poly([ck(t0) for ck in fm.c], "x")


def match_normal_form(fib: Poly, nf) -> Any:
    """Scaling ``rho`` with ``fib(rho x)`` proportional to ``nf.quintic(x)``.

    The simple root fixes ``rho = r/r0`` with ``r0`` the simple root of the
    normal form; the double roots must then be ``rho(r0 + b^2)`` and
    ``rho(r0 + lambda^2)``.
    """
    f = fib.monic()
    parts = {m: fac for fac, m in squarefree_decomposition(f)}
    if set(parts) != {1, 2} or parts[1].degree != 1 or parts[2].degree != 2:
        raise NoMatch("fiber is not of multiplicity type (1, 2, 2)")
    r = -parts[1][0]
    if not r:
        raise NoMatch("simple root at 0 cannot be rescaled")
    r0 = nf.shift
    rho = r / r0
    x = Poly.gen("x")
    expected = (x - rho * (r0 + nf.b_sq)) * (x - rho * (r0 + nf.lambda_sq))
    if expected != parts[2]:
        raise NoMatch("double roots do not match the normal form")
    return rho


def match_cusps(fm: FamilyModel, convention: str = "eigenform") -> list[tuple[Any, Prototype, Any]]:
    """For each finite cusp orbit, the prototype (of the right component) matching its fiber."""
    protos = [p for p in enumerate_prototypes(fm.D)
              if fm.D != 17 or component_label(p) == fm.eps]
    out = []
    for pt in fm.finite_cusps():
        fib = fiber(fm, pt)
        found = None
        for proto in protos:
            try:
                rho = match_normal_form(fib, normal_form(proto, convention))
            except NoMatch:
                continue
            found = (pt, proto, rho)
            break
        if found is None:
            raise NoMatch(f"no prototype matches the fiber over {pt}")
        out.append(found)
    return out


# --- discriminant --------------------------------------------------------------

@dataclass
class DiscriminantReport:
    disc: Poly
    exponents: dict[str, int]
    unit: QuadNum
    unit_norm: Fraction
    unit_norm_primes: list[int]
    matches_printed: bool
    sign_only: bool

    def to_json(self) -> dict:
        return {
            "exponents": self.exponents,
            "unit": self.unit.to_json(),
            "unit_norm": str(self.unit_norm),
            "unit_norm_primes": self.unit_norm_primes,
            "matches_printed": self.matches_printed,
            "sign_only": self.sign_only,
        }


def _strip(p: Poly, f: Poly) -> tuple[Poly, int]:
    k = 0
    while True:
        q, r = divmod(p, f)
        if r:
            return p, k
        p, k = q, k + 1


@lru_cache(maxsize=None)
def _disc(fm: FamilyModel) -> Poly:
    return discriminant_x(fm.g())


@lru_cache(maxsize=None)
def discriminant_report(fm: FamilyModel) -> DiscriminantReport:
    disc = _disc(fm)
    t = Poly.gen("t")
    rest, e0 = _strip(disc, t)
    rest, e1 = _strip(rest, t - 1)
    rest, eq = _strip(rest, fm.cusp_quadratic)
    if rest.degree != 0:
        raise ArithmeticError(f"unexpected discriminant factor of degree {rest.degree}")
    unit = rest[0]
    nrm = unit.norm()
    primes = sorted(set(prime_factors(nrm.numerator)) | set(prime_factors(nrm.denominator)))
    exps = {"0": e0, "1": e1, "cusp_factor": eq}
    return DiscriminantReport(disc, exps, unit, nrm, primes,
                              unit == fm.disc_unit_printed,
                              unit == -fm.disc_unit_printed)


def unit_norm_support(rep: DiscriminantReport, D: int) -> set[int]:
    """Primes in the unit's norm once the power of D is removed."""
    return set(rep.unit_norm_primes) - {D}


# --- reduction ---------------------------------------------------------------------

@dataclass
class ReductionReport:
    p: int
    status: str
    evidence: list[str]

    def to_json(self) -> dict:
        return {"p": self.p, "status": self.status, "evidence": self.evidence}


def _norm_primes(x) -> set[int]:
    n = x.norm() if isinstance(x, QuadNum) else Fraction(x)
    if n == 0:
        return {0}
    return set(prime_factors(n.numerator)) | set(prime_factors(n.denominator))


def collision_norms(fm: FamilyModel) -> list[tuple[str, Fraction]]:
    """Norms whose prime divisors are exactly the primes where two cusps meet."""
    out: list[tuple[str, Fraction]] = []
    D = fm.D
    pts = fm.finite_cusps()
    rational = [p for p in pts if not isinstance(p, AlgebraicPoint)]
    algebraic = [p for p in pts if isinstance(p, AlgebraicPoint)]
    for i, a in enumerate(rational):
        qa = a if isinstance(a, QuadNum) else QuadNum(a, 0, D)
        # meeting infinity means a pole of the coordinate
        A, B, d = qa.parts()
        out.append((f"{a}~inf", Fraction(1, d)))
        for b in rational[i + 1:]:
            out.append((f"{a}~{b}", (qa - b).norm()))
    for pt in algebraic:
        q = pt.minpoly
        dens = [QuadNum(c, 0, D).parts()[2] if not isinstance(c, QuadNum) else c.parts()[2]
                for c in q.coeffs]
        out.append((f"{q}~inf", Fraction(1, max(dens))))
        lead = q[1] * q[1] - 4 * q[0]
        out.append((f"{q} self", lead.norm()))
        for a in rational:
            qa = a if isinstance(a, QuadNum) else QuadNum(a, 0, D)
            out.append((f"{q}~{a}", q(qa).norm()))
    return out


def good_reduction(fm: FamilyModel, p: int) -> ReductionReport:
    if p == 2 or p < 2:
        raise ValueError("p must be an odd prime")
    evidence: list[str] = []
    rep = discriminant_report(fm)
    if p in rep.unit_norm_primes:
        evidence.append(f"{p} divides the norm {rep.unit_norm} of the discriminant's unit part")
    for label, n in collision_norms(fm):
        if n == 0 or p in _norm_primes(n):
            evidence.append(f"cusps collide mod a prime above {p}: {label} (norm {n})")
    return ReductionReport(p, "bad_model" if evidence else "good", evidence)


# --- p = D -------------------------------------------------------------------------

def _vp(x: Fraction, p: int) -> int:
    if x == 0:
        return 10**9
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def ramified_valuation(x: QuadNum) -> int:
    """Valuation at the prime above D, normalized so that v(sqrt D) = 1."""
    p = x.D
    return min(2 * _vp(x.a, p), 2 * _vp(x.b, p) + 1)


def _residue(x: QuadNum) -> int:
    if ramified_valuation(x) < 0:
        raise ArithmeticError("element is not integral at the ramified prime")
    p = x.D
    a = x.a
    return a.numerator * pow(a.denominator, -1, p) % p


@dataclass
class PotentialReductionReport:
    p: int
    alpha: Poly
    congruence: bool
    normalization: int
    ghat: list[Poly]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "alpha": [int(c) for c in self.alpha.coeffs],
            "congruence": self.congruence,
            "normalization_half_powers": self.normalization,
            "ghat": [[int(c) for c in g.coeffs] for g in self.ghat],
        }


def potentially_good_at_D(fm: FamilyModel) -> PotentialReductionReport:
    """Shift by the fifth-power root mod sqrt(D), rescale ``z = sqrt(D) w`` and reduce."""
    p = fm.D
    s = fm.sqrt_d
    inv5 = pow(5, -1, p)
    alpha = Poly([(_residue(c) * inv5) % p for c in fm.c[4].coeffs], "t")
    # g == (x + alpha)^5 mod the ramified prime
    lhs = [Poly([_residue(c) for c in ck.coeffs], "t").map(lambda v: v % p) for ck in fm.c]
    rhs_poly = Poly([alpha.map(lambda v: QuadNum(v, 0, p)), Poly([QuadNum(1, 0, p)], "t")], "x") ** 5
    rhs = [Poly([_residue(c) for c in rhs_poly[k].coeffs], "t") for k in range(6)]
    congruence = all(Poly([v % p for v in lhs[k].coeffs]) == Poly([v % p for v in rhs[k].coeffs])
                     for k in range(6))
    if not congruence:
        raise CongruenceFails(f"g is not a fifth power modulo sqrt({p})")
    alpha_q = alpha.map(lambda v: QuadNum(v, 0, p))
    shift = Poly([-alpha_q, Poly([QuadNum(1, 0, p)], "t")], "x")
    shifted = fm.g().compose(shift)
    coeffs = [shifted[k] * (s**k) for k in range(6)]
    vals = [min((ramified_valuation(c) for c in ck.coeffs if c), default=10**9) for ck in coeffs]
    m = min(vals)
    scale = s ** (-m)
    ghat = []
    for ck in coeffs:
        ghat.append(Poly([_residue(c * scale) for c in ck.coeffs], "t"))
    return PotentialReductionReport(p, alpha, congruence, m, ghat)


# --- j-invariant ---------------------------------------------------------------------

@dataclass
class JReport:
    s: QuadNum
    j: QuadNum
    rational: bool

    def to_json(self) -> dict:
        return {"s": self.s.to_json(), "j": self.j.to_json(), "rational": self.rational}


def j_of_crossratio(chi):
    return 256 * (chi * chi - chi + 1) ** 3 / (chi * chi * (chi - 1) ** 2)


def cusp_j_invariant(D: int) -> JReport:
    """j of the four points {1, -1, inf, s}, s the image of the quadratic cusp pair under (t + 1/t)/2."""
    fm = family(D, 1)
    s = -fm.cusp_quadratic[1] / 2
    chi = (s + 1) / (s - 1)
    j = j_of_crossratio(chi)
    return JReport(s, j, j.conj() == j)
