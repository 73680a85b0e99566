import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodex.arithmetic import (
    FactoredSpectrum,
    IntPoly,
    X,
    charpoly_by_expansion,
    cyclotomic,
    divisors,
    f_poly,
    is_probable_prime,
    lcm,
    moore_bound,
    moore_bound_mod,
    power_sums,
    spectrum_trace,
    totient,
)
from oracles import charpoly_at, poly_from_roots


def test_moore_bound_examples():
    assert moore_bound(7, 2) == 57
    assert moore_bound(3, 2) == 13
    assert moore_bound(1, 5) == 6
    assert moore_bound(6, 3) == 259


@given(st.integers(2, 30), st.integers(0, 40))
def test_moore_bound_closed_form(d, k):
    assert moore_bound(d, k) == (d ** (k + 1) - 1) // (d - 1)


@given(st.integers(1, 20), st.integers(0, 300), st.integers(1, 10**6))
def test_moore_bound_mod_matches_bignum(d, k, m):
    assert moore_bound_mod(d, k, m) == moore_bound(d, k) % m


def test_moore_bound_mod_large():
    assert moore_bound_mod(12, 10000, 10001) == moore_bound(12, 10000) % 10001


def _trial_division_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def test_primality_small_range():
    for n in range(-5, 5000):
        assert is_probable_prime(n) == _trial_division_prime(n), n


def test_primality_degree3_orders():
    assert is_probable_prime(moore_bound(3, 3) + 1)  # 41
    assert not is_probable_prime(moore_bound(3, 5) + 1)  # 365


def test_divisors_and_totient():
    assert divisors(60) == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]
    for n in range(1, 200):
        assert totient(n) == sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def test_lcm():
    assert lcm(4, 6, 10) == 60
    assert lcm(7) == 7


def test_cyclotomic_examples():
    assert cyclotomic(12) == IntPoly.parse("1 0 -1 0 1")
    assert cyclotomic(1) == X - 1
    assert cyclotomic(2) == X + 1


@pytest.mark.parametrize("n", range(1, 61))
def test_cyclotomic_product_is_x_n_minus_one(n):
    prod = IntPoly((1,))
    for e in divisors(n):
        prod = prod * cyclotomic(e)
    assert prod == X**n - 1
    assert cyclotomic(n).degree == totient(n)


def test_f_poly_example():
    assert f_poly(4, 2) == IntPoly.parse("2 2 3 2 1")
    assert f_poly(1, 2) == IntPoly.parse("0 1 1")


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6), st.lists(st.integers(-20, 20), max_size=6))
def test_divmod_reconstructs(a, b):
    p = IntPoly(tuple(a))
    q = IntPoly(tuple(b) + (1,))
    quot, rem = divmod(p, q)
    assert quot * q + rem == p
    assert rem.is_zero or rem.degree < q.degree


@given(st.lists(st.integers(-50, 50), max_size=8))
def test_serialize_roundtrip(coeffs):
    p = IntPoly(tuple(coeffs))
    assert IntPoly.parse(p.serialize()) == p


def test_exact_div_rejects_remainder():
    with pytest.raises(ArithmeticError):
        (X**2 + 1).exact_div(X - 1)


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=7))
def test_newton_identities_self_consistent(roots):
    p = poly_from_roots(roots)
    sums = power_sums(p, 8)
    for r in range(1, 9):
        assert sums[r - 1] == sum(x**r for x in roots)


def test_power_sums_quadratic():
    assert power_sums(IntPoly.parse("2 1 1"), 3) == [-1, -3, 5]


def test_power_sums_non_monic_rejected():
    with pytest.raises(ValueError):
        power_sums(IntPoly.parse("1 2"), 2)


@given(st.lists(st.tuples(st.lists(st.integers(-4, 4), min_size=1, max_size=3), st.integers(0, 3)), max_size=4))
def test_spectrum_trace_matches_expanded_power_sums(parts):
    s = FactoredSpectrum([(IntPoly(tuple(c) + (1,)), m) for c, m in parts])
    expanded = s.expand()
    assert expanded.degree == s.dimension
    if s.dimension:
        sums = power_sums(expanded, 4)
        for r in range(1, 5):
            assert spectrum_trace(s, r) == sums[r - 1]


@settings(max_examples=40)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_charpoly_expansion_matches_elimination(matrix):
    p = charpoly_by_expansion(matrix)
    assert p.degree == len(matrix) and p.leading == 1
    for t in (-3, -1, 0, 2, 5):
        assert p(t) == charpoly_at(matrix, t)
