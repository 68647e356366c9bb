"""Exact and modular elimination, prime generation, dense solving."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trivalent import linalg as la


class TestPrimes:
    def test_known_values(self):
        assert la.is_probable_prime(2)
        assert la.is_probable_prime(2**31 - 1)
        assert not la.is_probable_prime(1)
        assert not la.is_probable_prime(2**30)
        assert not la.is_probable_prime(3215031751)  # strong pseudoprime to 2,3,5,7

    def test_gen_primes_deterministic(self):
        a = la.gen_primes(4, seed=11)
        b = la.gen_primes(4, seed=11)
        assert a == b
        assert len(set(a)) == 4
        for p in a:
            assert (1 << 30) <= p < (1 << 31)
            assert la.is_probable_prime(p)

    def test_gen_primes_seed_sensitivity(self):
        assert la.gen_primes(3, seed=1) != la.gen_primes(3, seed=2)


def sparse(rows):
    return [{j: v for j, v in enumerate(r) if v} for r in rows]


small_matrix = st.lists(
    st.lists(st.integers(-4, 4), min_size=1, max_size=6),
    min_size=1,
    max_size=6,
).filter(lambda m: len({len(r) for r in m}) == 1)


class TestRank:
    def test_simple(self):
        rows = sparse([[1, 2], [2, 4], [0, 1]])
        assert la.exact_rank(rows) == 2

    def test_rational_entries(self):
        rows = [{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: 3, 1: 2}]
        assert la.exact_rank(rows) == 1

    @given(small_matrix)
    @settings(max_examples=200, deadline=None)
    def test_modular_agrees_with_exact(self, m):
        rows = sparse(m)
        p = 2147483647
        assert la.rank_mod_p(rows, p) == la.exact_rank(rows)

    def test_bad_prime(self):
        with pytest.raises(la.BadPrimeError):
            la.row_mod_p({0: Fraction(1, 7)}, 7)


class TestRref:
    @given(small_matrix)
    @settings(max_examples=100, deadline=None)
    def test_kills_row_span_and_is_idempotent(self, m):
        rows = sparse(m)
        piv = la.exact_rref(rows)
        for r in rows:
            assert la.reduce_vector(r, piv) == {}
        for r in rows:
            res = la.reduce_vector(r, piv)
            assert la.reduce_vector(res, piv) == res

    def test_rank_matches(self):
        rows = sparse([[1, 1, 0], [0, 1, 1], [1, 0, -1]])
        assert len(la.exact_rref(rows)) == la.exact_rank(rows) == 2

    def test_reduction_is_linear(self):
        rows = sparse([[1, 2, 0], [0, 0, 3]])
        piv = la.exact_rref(rows)
        u, v = {1: Fraction(5)}, {2: Fraction(7), 1: Fraction(-1)}
        ru = la.reduce_vector(u, piv)
        rv = la.reduce_vector(v, piv)
        w = dict(u)
        for c, val in v.items():
            w[c] = w.get(c, 0) + val
        rw = la.reduce_vector(w, piv)
        combo = dict(ru)
        for c, val in rv.items():
            combo[c] = combo.get(c, 0) + val
        combo = {c: v for c, v in combo.items() if v}
        assert rw == combo


class TestSolve:
    def test_exact_solution(self):
        a = [[1, 2], [3, 4]]
        b = [[5], [6]]
        x = la.solve_exact(a, b)
        assert la.mat_mul([[Fraction(v) for v in r] for r in a], x) == [
            [Fraction(5)],
            [Fraction(6)],
        ]

    def test_inconsistent(self):
        assert la.solve_exact([[1, 1], [1, 1]], [[0], [1]]) is None

    def test_underdetermined_picks_free_zero(self):
        x = la.solve_exact([[1, 1]], [[2]])
        assert x == [[Fraction(2)], [Fraction(0)]]

    @given(small_matrix, st.integers(0, 3))
    @settings(max_examples=100, deadline=None)
    def test_constructed_systems_solve(self, m, qcols):
        a = [[Fraction(v) for v in row] for row in m]
        n = len(a[0])
        q = qcols + 1
        x0 = [[Fraction((i + j) % 3 - 1) for j in range(q)] for i in range(n)]
        b = la.mat_mul(a, x0)
        x = la.solve_exact(a, b)
        assert x is not None
        assert la.mat_mul(a, x) == b


class TestHelpers:
    def test_identity_and_transpose(self):
        i3 = la.identity_matrix(3)
        assert la.mat_transpose(i3) == i3
        assert la.mat_mul(i3, i3) == i3

    def test_sub_neg_zero(self):
        a = [[Fraction(1), Fraction(2)]]
        assert la.mat_sub(a, a) == [[0, 0]]
        assert la.is_zero_matrix(la.mat_sub(a, a))
        assert la.mat_neg(a) == [[-1, -2]]
