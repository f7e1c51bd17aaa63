from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nilderiv.arith import (ArithmeticError_, ClosednessError, MultiPoly, RatFunc,
                            divided_power, formal_integrate, partial_derivative, poly_gcd,
                            potential, rat_normalize)

from conftest import nonzero_polys, polys, ratfuncs, x

SYMS = sympy.symbols("x1 x2 x3")


def to_sympy(p: MultiPoly):
    return sum((sympy.Rational(c.numerator, c.denominator)
                * sympy.Mul(*[s ** k for s, k in zip(SYMS, e)])
                for e, c in p.terms.items()), sympy.Integer(0))


def from_sympy(expr, n=3) -> MultiPoly:
    P = sympy.Poly(sympy.expand(expr), *SYMS[:n])
    return MultiPoly(n, {e: Fraction(int(c.p), int(c.q)) for e, c in P.terms()})


class TestRing:
    def test_cancellation(self):
        assert (x(1) + 1) + (-x(1)) == MultiPoly.one(3)

    def test_difference_of_squares(self):
        assert (x(1) - x(2)) * (x(1) + x(2)) == x(1) ** 2 - x(2) ** 2

    def test_absorbing_zero(self):
        assert (x(1) * x(2) + 3) * MultiPoly.zero(3) == MultiPoly.zero(3)

    def test_variable_count_mismatch(self):
        with pytest.raises(ArithmeticError_):
            MultiPoly.var(0, 2) + MultiPoly.var(0, 3)

    def test_zero_coefficients_dropped(self):
        p = MultiPoly(2, {(1, 0): Fraction(0), (0, 0): Fraction(2)})
        assert p.terms == {(0, 0): Fraction(2)}

    def test_printing_is_graded_lex(self):
        p = x(3) - x(1) ** 2 * x(2) * Fraction(3, 2) + 2
        assert p.to_str() == "-(3/2)*x1^2*x2 + x3 + 2"

    @given(polys(), polys(), polys())
    @settings(max_examples=60)
    def test_ring_axioms(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r

    @given(polys(), polys())
    @settings(max_examples=40)
    def test_product_matches_sympy(self, p, q):
        assert p * q == from_sympy(to_sympy(p) * to_sympy(q))


class TestGcd:
    def test_explicit_factor(self):
        assert poly_gcd(x(1) ** 2 - x(2) ** 2, x(1) - x(2)) == x(1) - x(2)

    def test_unit(self):
        assert poly_gcd(x(1) * x(2) + 1, MultiPoly.one(3)) == MultiPoly.one(3)

    def test_monomials(self):
        assert poly_gcd(x(1) * x(2), x(1) ** 2) == x(1)

    def test_both_zero(self):
        with pytest.raises(ArithmeticError_):
            poly_gcd(MultiPoly.zero(3), MultiPoly.zero(3))

    @given(nonzero_polys(max_degree=2), nonzero_polys(max_degree=2), nonzero_polys(max_degree=2))
    @settings(max_examples=40)
    def test_common_factor_found(self, f, g, h):
        G = poly_gcd(f * h, g * h)
        assert G.divides(f * h) and G.divides(g * h)
        assert h.divides(G)

    @given(nonzero_polys(max_degree=3), nonzero_polys(max_degree=3))
    @settings(max_examples=40)
    def test_matches_sympy(self, p, q):
        ours = poly_gcd(p, q)
        ref = from_sympy(sympy.gcd(to_sympy(p), to_sympy(q)))
        assert ours == ref.monic()


class TestRatFunc:
    def test_cancellation(self):
        assert RatFunc(x(1) ** 2 - x(2) ** 2, x(1) - x(2)) == RatFunc.from_poly(x(1) + x(2))

    def test_constant_cancellation(self):
        r = rat_normalize(x(1).scale(2), MultiPoly.constant(2, 3))
        assert r.is_polynomial() and r.num == x(1)

    def test_zero_normal_form(self):
        r = RatFunc(MultiPoly.zero(3), x(1) + 1)
        assert not r.num and r.den == MultiPoly.one(3)

    def test_zero_denominator(self):
        with pytest.raises(ArithmeticError_):
            rat_normalize(x(1), MultiPoly.zero(3))

    def test_denominator_is_monic(self):
        r = RatFunc(x(1), x(2).scale(3) + 6)
        assert r.den.leading_coeff() == 1

    @given(ratfuncs(), ratfuncs())
    @settings(max_examples=40)
    def test_field_operations(self, r, s):
        assert (r + s) - s == r
        if s:
            assert (r * s) / s == r
        assert r * (r + s) == r * r + r * s

    @given(polys(max_degree=2), nonzero_polys(max_degree=2))
    @settings(max_examples=40)
    def test_normalize_preserves_value(self, p, q):
        r = rat_normalize(p, q)
        assert r.num * q == p * r.den
        assert rat_normalize(r.num, r.den) == r


class TestCalculus:
    def test_power_rule(self):
        assert partial_derivative(RatFunc.from_poly(x(1) ** 2 * x(2)), 0) == \
            RatFunc.from_poly(x(1) * x(2) * 2)

    def test_quotient_rule(self):
        f = RatFunc(x(1), x(1) + 1)
        assert partial_derivative(f, 0) == RatFunc(MultiPoly.one(3), (x(1) + 1) ** 2)

    def test_independent_variable(self):
        assert not partial_derivative(RatFunc.from_poly(x(1)), 1)

    def test_index_out_of_range(self):
        with pytest.raises(ArithmeticError_):
            partial_derivative(RatFunc.from_poly(x(1)), 3)

    def test_integrals(self):
        assert formal_integrate(x(3), 2) == x(3) ** 2 * Fraction(1, 2)
        assert formal_integrate(MultiPoly.one(3), 1) == x(2)
        assert formal_integrate(x(2) * x(3), 2) == x(2) * x(3) ** 2 * Fraction(1, 2)

    @given(polys(max_degree=4), st.integers(0, 2))
    @settings(max_examples=50)
    def test_diff_after_integrate(self, p, i):
        assert formal_integrate(p, i).diff(i) == p

    @given(ratfuncs(), ratfuncs(), st.integers(0, 2))
    @settings(max_examples=30)
    def test_product_rule(self, r, s, i):
        assert (r * s).diff(i) == r.diff(i) * s + r * s.diff(i)

    @given(polys(max_degree=3), st.integers(0, 2))
    @settings(max_examples=30)
    def test_diff_matches_sympy(self, p, i):
        assert p.diff(i) == from_sympy(sympy.diff(to_sympy(p), SYMS[i]))

    def test_divided_power(self):
        assert divided_power(x(1), 3) == x(1) ** 3 * Fraction(1, 6)


class TestPotential:
    def test_examples(self):
        u, v = x(1), x(2)
        assert potential(v, u, 0, 1) == u * v
        assert potential(u.scale(2), v ** 2 * 3, 0, 1) == u ** 2 + v ** 3
        assert potential(MultiPoly.one(3), MultiPoly.zero(3), 0, 1) == u

    def test_not_closed(self):
        with pytest.raises(ClosednessError):
            potential(x(2), MultiPoly.zero(3), 0, 1)

    @given(polys(max_degree=5, max_terms=5))
    @settings(max_examples=50)
    def test_recovers_gradient(self, h):
        f, g = h.diff(0), h.diff(1)
        p = potential(f, g, 0, 1)
        assert p.diff(0) == f and p.diff(1) == g
        assert not (h - p).diff(0) and not (h - p).diff(1)
