import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quadmoments import numthy, oracles, squaremult
from quadmoments.errors import InvalidArgument, TooLarge


@pytest.fixture(scope="module")
def sieve():
    return numthy.build_spf_sieve(2000)


SIEVE = numthy.build_spf_sieve(2000)
SMOOTH = [n for n in range(1, 31) if all(p in (2, 3, 5) for p in oracles.trial_primes(n))]
ROUGH = [n for n in range(1, 31) if all(p >= 7 for p in oracles.trial_primes(n))]


@given(st.lists(st.integers(1, 60), min_size=1, max_size=6))
def test_f_eval_matches_direct(comps):
    assert squaremult.f_eval(comps, SIEVE) == oracles.f_direct(comps)


@pytest.mark.parametrize("r", [2, 4])
@given(data=st.data())
def test_f_multiplicative(r, data):
    # disjoint prime supports guarantee coprimality without filtering
    ms = data.draw(st.lists(st.sampled_from(SMOOTH), min_size=r, max_size=r))
    ns = data.draw(st.lists(st.sampled_from(ROUGH), min_size=r, max_size=r))
    lhs = squaremult.f_eval([m * n for m, n in zip(ms, ns)], SIEVE)
    assert lhs == squaremult.f_eval(ms, SIEVE) * squaremult.f_eval(ns, SIEVE)


def test_f_values():
    assert squaremult.f_eval([1, 1], SIEVE) == 1
    assert squaremult.f_eval([2, 8], SIEVE) == Fraction(1, 2)
    assert squaremult.f_eval([6, 6, 1, 1], SIEVE) == Fraction(1, 3)
    assert squaremult.f_eval([2, 3], SIEVE) == 0


@pytest.mark.parametrize("r", [2, 4])
@pytest.mark.parametrize("Y", range(1, 13))
def test_enumeration_matches_scan(Y, r):
    got = [t.components for t in squaremult.enumerate_square_tuples(Y, r)]
    assert got == oracles.square_tuples_scan(Y, r)


def test_enumeration_weights():
    for t in squaremult.enumerate_square_tuples(8, 4):
        assert t.weight == oracles.f_direct(t.components)


@pytest.mark.parametrize("Y,r", [(0, 2), (5, 3), (5, 0)])
def test_enumeration_rejects(Y, r):
    with pytest.raises(InvalidArgument):
        list(squaremult.enumerate_square_tuples(Y, r))



def test_exact_small_values():
    assert squaremult.main_term_sum_exact(1, 4).value == Fraction(11, 3)
    assert squaremult.main_term_sum_exact(2, 2).value == Fraction(9, 2)
    assert squaremult.main_term_sum_exact(1, 1).value == 1


@pytest.mark.parametrize("k,Y", [(1, 1), (1, 7), (1, 25), (2, 3), (2, 6), (3, 3)])
def test_exact_vs_enumeration(k, Y):
    ref = sum(t.weight for t in squaremult.enumerate_square_tuples(Y, 2 * k))
    assert squaremult.main_term_sum_exact(k, Y).value == ref


@pytest.mark.parametrize("k,Y", [(1, 10), (1, 100), (1, 200), (2, 10), (2, 30), (2, 60)])
def test_fast_vs_exact(sieve, k, Y):
    exact = float(squaremult.main_term_sum_exact(k, Y).value)
    for method in ("buckets", "enumerate") if k == 1 else ("auto",):
        got = squaremult.main_term_sum(k, Y, sieve, method=method).value
        assert got == pytest.approx(exact, rel=1e-12)


def test_known_values(sieve):
    assert squaremult.main_term_sum(1, 10, sieve).value == pytest.approx(10.2238095238, rel=1e-10)
    assert squaremult.main_term_sum(1, 200, sieve).value == pytest.approx(322.090993441975, rel=1e-12)
    assert squaremult.main_term_sum(2, 60, sieve).value == pytest.approx(49412.8007, rel=1e-8)
    assert squaremult.main_term_sum(2, 60, sieve).tuple_count == 153608


@pytest.mark.parametrize("k,Y", [(1, 2000), (2, 80), (3, 12)])
def test_threads_do_not_change_sum(sieve, k, Y):
    base = squaremult.main_term_sum(k, Y, sieve, threads=1).value
    for t in (2, 5):
        assert squaremult.main_term_sum(k, Y, sieve, threads=t).value == base


def test_monotone_in_Y(sieve):
    vals = [squaremult.main_term_sum(2, Y, sieve).value for Y in range(1, 40)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_exact_refuses_large():
    with pytest.raises(TooLarge):
        squaremult.main_term_sum_exact(2, 61)
    with pytest.raises(TooLarge):
        squaremult.main_term_sum_exact(1, 201)


def test_sieve_too_small(sieve):
    with pytest.raises(ValueError):
        squaremult.main_term_sum(1, 5000, sieve)
