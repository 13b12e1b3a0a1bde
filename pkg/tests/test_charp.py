from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from teichfuchs.charp import (ExceptionalPrime, ModPoly, beta_n, cartier_pattern,
                              congruence_check, degree_bounds, degree_report,
                              expansion_solution, extract_BC, first_disagreement, frob_power,
                              honda_test, nonvanishing_index, p_curvature, prefix_agreement,
                              verify_mod_solution)
from teichfuchs.families import family
from teichfuchs.numring import PrimeContext, legendre, reduce_mod
from teichfuchs.picardfuchs import FuchsOp, derive_ode
from teichfuchs.polyalg import Poly, RationalFunction, SeriesPrefix
from teichfuchs.series import holomorphic_solution

GOOD = {17: (3, 5, 7, 11, 13), 13: (5, 7, 11)}
CASES = [(D, p, n) for D, ps in GOOD.items() for p in ps for n in (1, 2)]


def naive_product(a, b, ctx):
    """Convolution in (Z/p^n)[s]/(s^2 - D) written out by hand."""
    m, D = ctx.modulus, ctx.D
    out = [[0, 0] for _ in range(len(a) + len(b) - 1)]
    for i, (x0, x1) in enumerate(a):
        for j, (y0, y1) in enumerate(b):
            out[i + j][0] = (out[i + j][0] + x0 * y0 + D * x1 * y1) % m
            out[i + j][1] = (out[i + j][1] + x0 * y1 + x1 * y0) % m
    return out


def hypergeometric_op() -> FuchsOp:
    t = Poly.gen()
    P = t * (1 - t)
    return FuchsOp(RationalFunction(1 - t * 2, P), RationalFunction(Poly([Fraction(-1, 4)]), P))


class TestModPoly:
    @pytest.mark.parametrize("p,n", [(5, 3), (13, 2), (3, 4)])
    @pytest.mark.parametrize("size", [7, 90])
    def test_product_matches_convolution(self, p, n, size):
        ctx = PrimeContext(17, p, n)
        rng = random.Random(p * 100 + size)
        m = ctx.modulus
        a = [(rng.randrange(m), rng.randrange(m) if ctx.k == 2 else 0) for _ in range(size)]
        b = [(rng.randrange(m), rng.randrange(m) if ctx.k == 2 else 0) for _ in range(size + 3)]
        A = ModPoly(ctx, [x for x, _ in a], [y for _, y in a] if ctx.k == 2 else None)
        B = ModPoly(ctx, [x for x, _ in b], [y for _, y in b] if ctx.k == 2 else None)
        want = naive_product(a, b, ctx)
        got = A * B
        assert [got[i] for i in range(len(want))] == [ctx.element(*w) for w in want]

    @settings(max_examples=30)
    @given(st.lists(st.integers(0, 124), min_size=1, max_size=6), st.integers(0, 9))
    def test_pow(self, cs, e):
        ctx = PrimeContext(17, 5, 3)
        f = ModPoly(ctx, cs, [c // 2 for c in cs])
        acc = ModPoly.const(ctx, 1)
        for _ in range(e):
            acc = acc * f
        assert f**e == acc

    def test_reduction_of_rational_poly(self):
        ctx = PrimeContext(17, 13, 1)
        s = family(17).sqrt_d
        f = Poly([(81 - 15 * s) / 16, 1])
        mp = ModPoly.from_poly(f, ctx)
        assert mp[0] == ctx.element(4) and mp[1] == ctx.one()

    def test_field_gcd(self):
        ctx = PrimeContext(17, 13, 1)
        t = Poly.gen()
        f = ModPoly.from_poly((t - 1) * (t - 2), ctx)
        g = ModPoly.from_poly((t - 1) * (t - 5), ctx)
        assert f.gcd(g) == ModPoly.from_poly(t - 1, ctx)


class TestExpansion:
    @pytest.mark.parametrize("D,p", [(17, 3), (17, 5), (17, 13), (13, 5), (13, 7)])
    def test_against_exact_power(self, D, p):
        fm = family(D)
        ctx = PrimeContext(D, p, 1)
        exact = fm.g() ** ((p - 1) // 2)
        h = frob_power(fm, ctx)
        for i in range(exact.degree + 1):
            assert h.coeff_x(i) == ModPoly.from_poly(exact[i], ctx)

    def test_exceptional(self):
        with pytest.raises(ExceptionalPrime):
            cartier_pattern(family(17), 17)
        with pytest.raises(ExceptionalPrime):
            extract_BC(family(13), PrimeContext(13, 3, 1))

    @pytest.mark.parametrize("D,p,n", CASES)
    def test_solutions(self, D, p, n):
        fm = family(D)
        ctx = PrimeContext(D, p, n)
        bc = extract_BC(fm, ctx)
        for i in (1, 2):
            L = derive_ode(fm, i)
            f = expansion_solution(fm, i, ctx)
            assert f and verify_mod_solution(L, f)
        # B solves L1 and C solves L2 even where they vanish
        assert verify_mod_solution(derive_ode(fm, 1), bc.B1)
        assert verify_mod_solution(derive_ode(fm, 2), bc.C2)

    def test_random_polynomial_is_not_a_solution(self):
        ctx = PrimeContext(17, 5, 1)
        f = ModPoly(ctx, [1, 2, 3], [0, 1, 0])
        assert not verify_mod_solution(derive_ode(family(17), 1), f)


class TestPatterns:
    @pytest.mark.parametrize("D,p", [(D, p) for D, ps in GOOD.items() for p in ps])
    def test_cartier(self, D, p):
        rep = cartier_pattern(family(D), p)
        assert rep.legendre == legendre(D, p)
        assert rep.holds

    @pytest.mark.parametrize("D,p,n", [(D, p, 1) for D, ps in GOOD.items() for p in ps]
                             + [(17, 3, 2), (17, 5, 2), (13, 5, 2)])
    def test_congruences(self, D, p, n):
        ok, checks = congruence_check(family(D), p, n, detail=True)
        assert ok, checks

    def test_nonvanishing_index(self):
        assert [nonvanishing_index(17, 13, n) for n in (1, 2, 3)] == [1, 1, 1]
        assert [nonvanishing_index(17, 5, n) for n in (1, 2, 3)] == [2, 1, 2]

    @pytest.mark.parametrize("D,p,n", CASES)
    def test_degrees(self, D, p, n):
        rep = degree_report(family(D), PrimeContext(D, p, n))
        assert rep["within_bounds"] and rep["attained"]

    def test_degree_bound_values(self):
        assert degree_bounds(5, 1) == {"d1": 6, "d2": 1, "e1": 7, "e2": 2}

    @pytest.mark.parametrize("D,p,n", CASES)
    def test_beta(self, D, p, n):
        for i in (1, 2):
            rep = beta_n(family(D), i, PrimeContext(D, p, n))
            assert rep.congruence_ok and rep.bound_ok


class TestPrefixes:
    @pytest.mark.parametrize("p,n", [(5, 1), (5, 2), (13, 1), (7, 2)])
    def test_agreement_below_p(self, p, n):
        fm = family(17)
        ctx = PrimeContext(17, p, n)
        assert prefix_agreement(fm, derive_ode(fm, 1), ctx, upto=p - 1)

    def test_full_agreement_when_beta_small(self):
        fm = family(17)
        ctx = PrimeContext(17, 5, 1)
        assert beta_n(fm, 1, ctx).beta < 5
        assert prefix_agreement(fm, derive_ode(fm, 1), ctx)

    @pytest.mark.parametrize("p", [7, 11, 13])
    def test_quotient_is_a_series_in_t_to_the_p(self, p):
        fm = family(17)
        L = derive_ode(fm, 1)
        ctx = PrimeContext(17, p, 1)
        v = expansion_solution(fm, 1, ctx).normalized()
        N = 4 * p
        u = holomorphic_solution(L, N)
        us = SeriesPrefix([reduce_mod(c, ctx) for c in u.coeffs], N)
        vs = SeriesPrefix([v[j] for j in range(N + 1)], N)
        h = us * vs.inverse()
        assert all(j % p == 0 for j in range(N + 1) if h[j])

    def test_first_disagreement_at_p(self):
        fm = family(17)
        ctx = PrimeContext(17, 13, 1)
        assert first_disagreement(fm, derive_ode(fm, 1), ctx) == 13


class TestNilpotence:
    @pytest.mark.parametrize("D,p", [(17, 3), (17, 7), (13, 5), (13, 11)])
    def test_family_operators(self, D, p):
        for i in (1, 2):
            L = derive_ode(family(D), i)
            pc = p_curvature(L, p)
            assert pc.nilpotent and not pc.zero
            assert honda_test(L, p)

    def test_hypergeometric(self):
        L = hypergeometric_op()
        for p in (3, 5, 7):
            assert p_curvature(L, p).nilpotent
            res = honda_test(L, p)
            assert res.has_solution
            assert verify_mod_solution(L, res.witness)

    def test_trivial_operator_has_zero_curvature(self):
        L = FuchsOp(RationalFunction(Poly([])), RationalFunction(Poly([])))
        assert p_curvature(L, 5).zero

    def test_exponential_is_not_nilpotent(self):
        L = FuchsOp(RationalFunction(Poly([])), RationalFunction(Poly([-1])))
        for p in (3, 5, 7):
            assert not p_curvature(L, p).nilpotent
            assert not honda_test(L, p)

    @pytest.mark.parametrize("p", [3, 5])
    def test_against_sympy_iteration(self, p):
        # A_1 = A, A_(k+1) = A_k' + A_k A over Q(t), then reduce mod p
        t = sympy.Symbol("t")
        P = t * (1 - t)
        A = sympy.Matrix([[0, 1], [sympy.Rational(1, 4) / P, -(1 - 2 * t) / P]])
        Ak = A
        for _ in range(p - 1):
            Ak = (Ak.diff(t) + Ak * A).applyfunc(sympy.cancel)
        pc = p_curvature(hypergeometric_op(), p)
        den = sympy.Poly(P.expand() ** p * (-1) ** p, t)  # the cleared P2 is monic: t^2 - t
        for i in range(2):
            for j in range(2):
                want = sympy.Poly(sympy.cancel(Ak[i, j] * den.as_expr()), t)
                got = [pc.N[i][j][k].c0 % p for k in range(pc.N[i][j].degree + 1)] \
                    if pc.N[i][j] else []
                wc = [int(sympy.Rational(c).p * pow(int(sympy.Rational(c).q), -1, p)) % p
                      for c in reversed(want.all_coeffs())]
                while wc and wc[-1] == 0:
                    wc.pop()
                assert got == wc
