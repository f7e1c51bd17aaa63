import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilderiv.arith import MultiPoly, RatFunc
from nilderiv.derivations import bracket
from nilderiv.lie import (LieBasis, LieStructureError, NotAnIdeal, NotClosed,
                          NotNilpotentOperator, Subspace, bracket_preimage, center, centralizer,
                          ideal_RI_cap_L, is_ideal, jordan_chains, k_linear_reduce,
                          lower_central_series, quotient_chains, rank_over_R,
                          structure_constants, verify_rational_constants)
from nilderiv.lie import _operator_on
from nilderiv.samples import SAMPLE_FORMS, normal_form, random_triangular, transport

from conftest import d, derivations, x
from oracles import commutes_with_all, in_R_span, is_nilpotent_jordan, rank_by_minors

HEIS = [d(1), x(3) * d(1) + d(2), d(3)]
DIAG = [x(1) * d(1), x(2) * d(2), x(3) * d(3)]
L1_FIX = [d(3), d(1), x(3) * d(1), d(2), x(3) * d(2)]


def span(L, *elems):
    return Subspace.span([L.coords(e) for e in elems], L.dim)


class TestReduce:
    def test_examples(self):
        assert k_linear_reduce([d(1), d(1) * 2]).gens == (d(1),)
        assert k_linear_reduce([d(1), d(2)]).gens == (d(1), d(2))
        red = k_linear_reduce([x(1) * d(1), x(1) * d(1) + d(2), d(2)])
        assert red.gens == (x(1) * d(1), x(1) * d(1) + d(2))

    def test_empty(self):
        assert k_linear_reduce([], 3).dim == 0

    def test_dependent_basis_rejected(self):
        with pytest.raises(LieStructureError):
            LieBasis.of([d(1), d(1) * 3])

    def test_coords_with_rational_coefficients(self):
        inv = RatFunc(MultiPoly.one(3), x(1) + 1)
        L = LieBasis.of([inv * d(2), d(1)])
        assert L.coords(inv * d(2) * 3 - d(1)) == (3, -1)
        assert L.coords(d(2)) is None


class TestStructure:
    def test_heisenberg(self):
        sc = structure_constants(LieBasis.of(HEIS))
        assert sc.c[2][1] == (1, 0, 0)
        assert sc.c[1][2] == (-1, 0, 0)
        assert not any(sc.c[0][1]) and not any(sc.c[0][2])

    def test_abelian(self):
        sc = structure_constants(LieBasis.of(DIAG))
        assert all(not any(v) for row in sc.c for v in row)

    def test_not_nilpotent_pair(self):
        sc = structure_constants(LieBasis.of([d(1, 1), x(1, 1) * d(1, 1)]))
        assert sc.c[1][0] == (-1, 0)

    def test_not_closed(self):
        with pytest.raises(NotClosed) as err:
            structure_constants(LieBasis.of([d(1), x(1) ** 2 * d(1)]))
        assert err.value.pair == (0, 1)

    @given(st.integers(0, 10 ** 6), st.sampled_from(SAMPLE_FORMS))
    @settings(max_examples=15)
    def test_tensor_axioms(self, seed, form):
        rng = random.Random(seed)
        gens = transport(normal_form(*form).gens, random_triangular(rng), rng)
        sc = structure_constants(LieBasis.of(gens))
        assert sc.is_antisymmetric() and sc.satisfies_jacobi()


class TestSeries:
    def test_heisenberg(self):
        s = lower_central_series(LieBasis.of(HEIS))
        assert s.dims == [3, 1, 0] and s.nilpotent and s.nilpotency_class == 2

    def test_abelian(self):
        s = lower_central_series(LieBasis.of(DIAG))
        assert s.nilpotency_class == 1

    def test_not_nilpotent(self):
        s = lower_central_series(LieBasis.of([d(1, 1), x(1, 1) * d(1, 1)]))
        assert not s.nilpotent and s.dims == [2, 1]

    def test_l2_class(self):
        s = lower_central_series(LieBasis.of(normal_form("L2", 0, 1).gens))
        assert s.nilpotent and s.nilpotency_class == 3


class TestCenter:
    def test_heisenberg(self):
        L = LieBasis.of(HEIS)
        assert center(L) == span(L, d(1))

    def test_abelian(self):
        L = LieBasis.of(DIAG)
        assert center(L).dim == 3

    def test_l1_form(self):
        L = LieBasis.of(L1_FIX)
        assert center(L) == span(L, d(1), d(2))

    @given(st.integers(0, 10 ** 6), st.sampled_from(SAMPLE_FORMS))
    @settings(max_examples=15)
    def test_against_brackets(self, seed, form):
        rng = random.Random(seed)
        L = LieBasis.of(transport(normal_form(*form).gens, random_triangular(rng), rng))
        Z = center(L)
        assert all(commutes_with_all(z, L.gens) for z in Z.elements(L))
        for v in L.full().complement_basis(Z):
            assert not commutes_with_all(L.element(v), L.gens)
        # rank of the center equals its dimension when constants are rational
        assert rank_over_R(Z.elements(L)) == Z.dim

    def test_centralizer_and_preimage(self):
        L = LieBasis.of(HEIS)
        Z = center(L)
        assert centralizer(L, Z) == L.full()
        assert bracket_preimage(L, Z) == L.full()
        assert bracket_preimage(L, Subspace.zero(3)) == Z


class TestRank:
    def test_examples(self):
        assert rank_over_R([d(1, 1), x(1, 1) * d(1, 1)]) == 1
        assert rank_over_R(DIAG) == 3
        assert rank_over_R([d(1), d(2), x(2) * d(1) - x(1) * d(2)]) == 2

    @given(st.lists(derivations(max_degree=2), min_size=1, max_size=5))
    @settings(max_examples=30)
    def test_matches_minors(self, ds):
        assert rank_over_R(ds) == rank_by_minors(ds)

    @given(st.lists(derivations(rational=True), min_size=1, max_size=3))
    @settings(max_examples=15)
    def test_rational_rows(self, ds):
        assert rank_over_R(ds) == rank_by_minors(ds)


class TestRIcapL:
    def test_heisenberg(self):
        L = LieBasis.of(HEIS)
        assert ideal_RI_cap_L(L, span(L, d(1))) == span(L, d(1))

    def test_l1_form(self):
        L = LieBasis.of(L1_FIX)
        out = ideal_RI_cap_L(L, span(L, d(1), d(2)))
        assert out == span(L, d(1), x(3) * d(1), d(2), x(3) * d(2))

    def test_whole_algebra(self):
        L = LieBasis.of(L1_FIX)
        assert ideal_RI_cap_L(L, L.full()) == L.full()

    def test_not_an_ideal(self):
        L = LieBasis.of(HEIS)
        with pytest.raises(NotAnIdeal):
            ideal_RI_cap_L(L, span(L, d(3)))

    @given(st.integers(0, 10 ** 6), st.sampled_from(SAMPLE_FORMS[2:]))
    @settings(max_examples=15)
    def test_properties(self, seed, form):
        rng = random.Random(seed)
        L = LieBasis.of(transport(normal_form(*form).gens, random_triangular(rng), rng))
        Z = center(L)
        out = ideal_RI_cap_L(L, Z)
        assert Z <= out and is_ideal(L, out)
        zs = Z.elements(L)
        assert all(in_R_span(e, zs) for e in out.elements(L))
        for v in L.full().complement_basis(out):
            assert not in_R_span(L.element(v), zs)


class TestChains:
    def test_single_chain(self):
        L = LieBasis.of(L1_FIX)
        V = span(L, d(1), x(3) * d(1))
        chains = jordan_chains(L, V, d(3))
        assert [[L.element(v) for v in ch] for ch in chains] == [[x(3) * d(1), d(1)]]

    def test_two_blocks(self):
        L = LieBasis.of(L1_FIX)
        V = span(L, d(1), x(3) * d(1), d(2), x(3) * d(2))
        chains = jordan_chains(L, V, d(3))
        assert [len(c) for c in chains] == [2, 2]
        assert all(not bracket(d(3), L.element(c[-1])) for c in chains)

    def test_commuting(self):
        L = LieBasis.of(L1_FIX)
        assert [len(c) for c in jordan_chains(L, span(L, d(1)), d(2))] == [1]

    def test_not_nilpotent(self):
        L = LieBasis.of([d(1, 1), x(1, 1) * d(1, 1)])
        with pytest.raises(NotNilpotentOperator):
            jordan_chains(L, L.full(), x(1, 1) * d(1, 1))

    @given(st.integers(0, 10 ** 6), st.sampled_from(SAMPLE_FORMS[2:]))
    @settings(max_examples=15)
    def test_jordan_form(self, seed, form):
        rng = random.Random(seed)
        L = LieBasis.of(transport(normal_form(*form).gens, random_triangular(rng), rng))
        D = rng.choice(L.gens)
        V = center(L)
        V = ideal_RI_cap_L(L, V)
        chains = jordan_chains(L, V, D)
        assert sum(len(c) for c in chains) == V.dim
        basis = [v for c in chains for v in c]
        W = Subspace(tuple(basis), L.dim)
        N = _operator_on(L, W, D)
        assert is_nilpotent_jordan(N, [len(c) for c in chains])

    def test_quotient_chain(self):
        L = LieBasis.of(normal_form("L2", 0, 1).gens)
        I1 = span(L, d(1), x(3) * d(1), x(2) * d(1), x(2) * x(3) * d(1))
        I2 = I1 + span(L, d(2))
        assert quotient_chains(L, I2, I1, d(3)) == [[L.coords(d(2))]]


def test_verify_rational_constants():
    L = LieBasis.of([d(1), d(2)])
    assert verify_rational_constants(L, MultiPoly.constant(Fraction(3, 2), 3))
    assert not verify_rational_constants(L, x(3))
