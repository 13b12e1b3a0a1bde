from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
import sympy

from oracles import T, to_sym
from teichfuchs.families import family
from teichfuchs.numring import QuadNum
from teichfuchs.picardfuchs import FuchsOp, derive_ode
from teichfuchs.polyalg import Poly, RationalFunction, SeriesPrefix
from teichfuchs.series import (ExponentNormalization, annihilation_defect, boundary_identities,
                               build_recursion, holomorphic_solution, integrality_report,
                               normalize_at_zero)

s17 = QuadNum.sqrt_d(17)


def hypergeometric_op() -> FuchsOp:
    t = Poly.gen()
    P = t * (1 - t)
    return FuchsOp(RationalFunction(1 - t * 2, P), RationalFunction(Poly([Fraction(-1, 4)]), P))


class TestHypergeometric:
    def test_closed_form(self):
        u = holomorphic_solution(hypergeometric_op(), 30)
        assert [u[n] for n in range(31)] == [Fraction(comb(2 * n, n), 4**n) ** 2 for n in range(31)]

    def test_first_terms(self):
        u = holomorphic_solution(hypergeometric_op(), 2)
        assert [u[0], u[1], u[2]] == [1, Fraction(1, 4), Fraction(9, 64)]

    def test_integrality_needs_two(self):
        rep = integrality_report(hypergeometric_op(), {2}, 40)
        assert rep.ok and rep.denominator_primes() == {2}
        bad = integrality_report(hypergeometric_op(), set(), 10)
        assert not bad.ok and bad.violations[0] == (1, 2)


class TestPrintedPrefixes:
    def test_first_operator(self):
        u = holomorphic_solution(derive_ode(family(17, 1), 1), 3)
        assert list(u.coeffs) == [1, (81 - 15 * s17) / 16, (4845 - 1155 * s17) / 64,
                                  (3200225 - 775495 * s17) / 2048]

    def test_second_operator(self):
        u = holomorphic_solution(derive_ode(family(17, 1), 2), 3)
        assert list(u.coeffs) == [1, (23 - 5 * s17) / 8, (5561 - 1343 * s17) / 128,
                                  (452759 - 109793 * s17) / 512]

    def test_conjugate_model(self):
        a = holomorphic_solution(derive_ode(family(17, 0), 1), 10)
        b = holomorphic_solution(derive_ode(family(17, 1), 1), 10)
        assert a[0] == b[0] == 1
        assert [c.conj() for c in a.coeffs[1:]] == list(b.coeffs[1:])


class TestRecursion:
    @pytest.mark.parametrize("D,i", [(17, 1), (17, 2), (13, 1), (13, 2)])
    def test_boundaries(self, D, i):
        rec = build_recursion(derive_ode(family(D, 1), i))
        assert boundary_identities(rec, 200)
        assert rec.coeff(5, -1) == rec.sign * rec.M * 36

    @pytest.mark.parametrize("D,i", [(17, 1), (13, 2)])
    def test_annihilated(self, D, i):
        L = derive_ode(family(D, 1), i)
        u = holomorphic_solution(L, 25)
        assert not any(annihilation_defect(L, u).coeffs)

    def test_sympy_substitution(self):
        # independent check: plug the truncated series into the cleared operator
        L = derive_ode(family(17, 1), 1)
        N = 12
        u = holomorphic_solution(L, N)
        us = sum(to_sym(c) * T**k for k, c in enumerate(u.coeffs))
        P2, P1, P0 = (sum(to_sym(c) * T**k for k, c in enumerate(p.coeffs)) for p in L.cleared())
        expr = sympy.expand(P2 * sympy.diff(us, T, 2) + P1 * sympy.diff(us, T) + P0 * us)
        for k in range(N - 1):
            assert sympy.radsimp(expr.coeff(T, k)) == 0

    def test_gauged_operator_needs_normalization(self):
        from teichfuchs.picardfuchs import gauge_transform
        L = derive_ode(family(17, 1), 1)
        M = gauge_transform(L, RationalFunction(Poly.gen() ** 2))
        with pytest.raises(ExponentNormalization):
            build_recursion(M)
        back = normalize_at_zero(M)
        assert holomorphic_solution(back, 5) == holomorphic_solution(L, 5)


class TestIntegrality:
    def test_d17(self):
        for i in (1, 2):
            rep = integrality_report(derive_ode(family(17, 1), i), {2, 17}, 60)
            assert rep.ok
            assert rep.denominator_primes() <= {2}

    def test_d13(self):
        for i in (1, 2):
            rep = integrality_report(derive_ode(family(13), i), {2, 3, 13}, 60)
            assert rep.ok

    def test_smaller_set_fails(self):
        rep = integrality_report(derive_ode(family(17, 1), 1), {17}, 5)
        assert not rep.ok and rep.violations[0][1] == 2

    def test_report_json(self):
        rep = integrality_report(derive_ode(family(17, 1), 1), {2, 17}, 4)
        js = rep.to_json(with_prefix=True)
        assert js["ok"] and len(js["prefix"]) == 5


def test_series_prefix_type():
    assert isinstance(holomorphic_solution(hypergeometric_op(), 3), SeriesPrefix)
