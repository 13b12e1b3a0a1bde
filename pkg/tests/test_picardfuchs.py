from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import fiber_exact
from teichfuchs.families import INF, family
from teichfuchs.numring import QuadNum
from teichfuchs.picardfuchs import (DeRham, FuchsOp, IrregularSingularity, NonRationalExponent,
                                    SingularFiber, bareiss_solve, classify_singularities,
                                    derive_ode, dr_reduce, exactness_certificate,
                                    fuchs_relation_check, gauge_transform, gauss_manin,
                                    ks_quadratic, local_exponents, printed_operator)
from teichfuchs.polyalg import AlgebraicPoint, Poly, RationalFunction

MODELS = [(17, 1), (17, 0), (13, 1)]
x = Poly.gen("x")
G = x**5 - x**2 * 3 + x + 7  # a squarefree quintic over Q


def op(A, B):
    return FuchsOp(A, B, [], None)


class TestBareiss:
    @settings(max_examples=40)
    @given(st.lists(st.integers(-6, 6), min_size=9, max_size=9),
           st.lists(st.integers(-6, 6), min_size=3, max_size=3))
    def test_against_sympy(self, entries, rhs):
        M = [entries[0:3], entries[3:6], entries[6:9]]
        det = sympy.Matrix(M).det()
        if det == 0:
            with pytest.raises(SingularFiber):
                bareiss_solve(M, rhs)
            return
        d, sol = bareiss_solve(M, rhs)
        assert abs(d) == abs(det)
        want = sympy.Matrix(M).solve(sympy.Matrix(rhs))
        assert [Fraction(v) / d for v in sol] == [Fraction(int(w.p), int(w.q)) for w in want]


class TestDeRham:
    def test_bezout_identity(self):
        dr = DeRham(G)
        assert (dr.b * G.deriv()) % G == Poly([dr.R], "x")

    def test_basis_is_fixed(self):
        for k in range(4):
            coords = dr_reduce(x**k, 1, G).coords
            assert coords == tuple(1 if j == k else 0 for j in range(4))

    @given(st.lists(st.integers(-9, 9), min_size=1, max_size=6), st.sampled_from([1, 3, 5]))
    def test_exact_forms_vanish(self, hc, m):
        # d(h / y^(m-2)) = (h' g - (m-2)/2 h g') dx / y^m
        h = Poly([Fraction(c) for c in hc], "x")
        P = h.deriv() * G - (h * G.deriv()).scale(Fraction(m - 2, 2))
        assert dr_reduce(P, m, G).is_zero()

    def test_linear_in_numerator(self):
        a = dr_reduce(x**6, 3, G)
        b = dr_reduce(x**2 + 1, 3, G)
        c = dr_reduce(x**6 + x**2 + 1, 3, G)
        assert a + b == c

    def test_singular_curve(self):
        with pytest.raises(SingularFiber):
            DeRham((x - 1) ** 2 * (x**3 + 2))

    def test_even_power_rejected(self):
        with pytest.raises(ValueError):
            DeRham(G).reduce(x, 2)


class TestOperators:
    @pytest.mark.parametrize("D,eps", MODELS)
    @pytest.mark.parametrize("i", [1, 2])
    def test_certificate_vanishes(self, D, eps, i):
        fm = family(D, eps)
        L = derive_ode(fm, i)
        assert exactness_certificate(fm, i, L).is_zero()

    @pytest.mark.parametrize("D", [17, 13])
    @pytest.mark.parametrize("i", [1, 2])
    def test_fiber_oracle_accepts_derived(self, D, i):
        fm = family(D, 1)
        assert fiber_exact(fm, i, derive_ode(fm, i))

    def test_fiber_oracle_rejects_perturbation(self):
        fm = family(17, 1)
        L = derive_ode(fm, 1)
        bad = FuchsOp(L.A, L.B + RationalFunction(Poly([QuadNum(1, 0, 17)])), [], 17)
        assert not fiber_exact(fm, 1, bad)

    @pytest.mark.parametrize("i", [1, 2])
    def test_d17_closed_forms(self, i):
        fm = family(17, 1)
        assert derive_ode(fm, i) == printed_operator(fm, i)

    def test_d13_first_operator_closed_form(self):
        fm = family(13)
        assert derive_ode(fm, 1) == printed_operator(fm, 1)
        assert derive_ode(fm, 2).A == printed_operator(fm, 2).A

    def test_d13_tabulated_B2_is_not_exact(self):
        # the tabulated B2 lacks the t^1 term and has a different constant;
        # both the reduction and the fiber oracle reject it
        fm = family(13)
        tab = printed_operator(fm, 2)
        assert not exactness_certificate(fm, 2, tab).is_zero()
        assert not fiber_exact(fm, 2, tab)
        s = QuadNum.sqrt_d(13)
        num = derive_ode(fm, 2).B
        P, Q = RationalFunction(Poly([0, -1, 1]) * family(13).cusp_quadratic), \
            RationalFunction(Poly([1, (5 + 28 * s) / 48, 1]))
        scaled = num * P * Q * (2**17 * 3)
        want = Poly([61440 - 18432 * s, -99072 + 106176 * s, 698944 + 5744 * s,
                     67584 + 135936 * s, QuadNum(98304, 0, 13)])
        assert scaled == RationalFunction(want)

    def test_conjugate_models(self):
        for i in (1, 2):
            assert derive_ode(family(17, 0), i) == derive_ode(family(17, 1), i).conj()

    def test_gauss_manin_order_zero(self):
        w = gauss_manin(family(17, 1), 2, 0)
        assert [bool(c) for c in w.coords] == [False, True, False, False]

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            gauss_manin(family(17, 1), 3, 1)


class TestExponents:
    @pytest.mark.parametrize("D,eps", MODELS)
    def test_first_operator(self, D, eps):
        fm = family(D, eps)
        L = derive_ode(fm, 1)
        for s in L.singularities:
            if s.kind == "cusp":
                assert s.exponents == (0, 0)
        assert local_exponents(L, INF) == (Fraction(3, 2), Fraction(3, 2))
        assert fuchs_relation_check(L)

    @pytest.mark.parametrize("D,eps", MODELS)
    def test_second_operator(self, D, eps):
        fm = family(D, eps)
        L = derive_ode(fm, 2)
        kinds = {s.kind for s in L.singularities}
        assert kinds == {"cusp", "ks_zero", "infinity"}
        for s in L.singularities:
            want = {"cusp": (0, 0), "ks_zero": (0, 2), "infinity": (Fraction(1, 2),) * 2}[s.kind]
            assert s.exponents == want
        assert fuchs_relation_check(L)
        q = ks_quadratic(L, fm)
        assert q is not None and q.degree == 2

    def test_algebraic_cusp(self):
        fm = family(13)
        L = derive_ode(fm, 1)
        pt = fm.finite_cusps()[-1]
        assert isinstance(pt, AlgebraicPoint)
        assert local_exponents(L, pt) == (0, 0)

    def test_hypergeometric(self):
        # t(1-t)u'' + (1-2t)u' - u/4 = 0: exponents (0,0) at 0, 1 and (1/2,1/2) at inf
        t = Poly.gen()
        P = t * (1 - t)
        L = op(RationalFunction(1 - t * 2, P), RationalFunction(Poly([Fraction(-1, 4)]), P))
        assert local_exponents(L, 0) == (0, 0)
        assert local_exponents(L, 1) == (0, 0)
        assert local_exponents(L, INF) == (Fraction(1, 2), Fraction(1, 2))
        sing = classify_singularities(L)
        assert [s.kind for s in sing] == ["singular", "singular", "infinity"]

    def test_irregular(self):
        t = Poly.gen()
        L = op(RationalFunction(Poly([])), RationalFunction(Poly([1]), t**3))
        with pytest.raises(IrregularSingularity):
            local_exponents(L, 0)

    def test_irrational(self):
        t = Poly.gen()
        L = op(RationalFunction(Poly([1]), t), RationalFunction(Poly([-2]), t**2))
        with pytest.raises(NonRationalExponent):
            local_exponents(L, 0)


class TestGauge:
    def test_trivial_operator(self):
        t = Poly.gen()
        L = op(RationalFunction(Poly([])), RationalFunction(Poly([])))
        M = gauge_transform(L, RationalFunction(t))
        assert M.A == RationalFunction(Poly([-2]), t)
        assert M.B == RationalFunction(Poly([2]), t**2)
        # solutions 1, t become t, t^2: exponents 1, 2
        assert local_exponents(M, 0) == (1, 2)

    def test_shift_on_family(self):
        fm = family(17, 1)
        L = derive_ode(fm, 1)
        t = Poly.gen()
        M = gauge_transform(L, RationalFunction(t**2))
        assert local_exponents(M, 0) == (2, 2)
        assert local_exponents(M, INF) == (Fraction(-1, 2), Fraction(-1, 2))

    def test_solutions_transported(self):
        # u'' = 0 has u = t; gauged by 1/(1+t) the result must annihilate t/(1+t)
        t = Poly.gen()
        L = op(RationalFunction(Poly([])), RationalFunction(Poly([])))
        f = RationalFunction(Poly([1]), t + 1)
        M = gauge_transform(L, f)
        assert not M.apply(RationalFunction(t, t + 1))
