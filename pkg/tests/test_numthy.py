import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quadmoments import numthy, oracles
from quadmoments.errors import InvalidArgument, InvalidDiscriminant, OutOfRange


@pytest.fixture(scope="module")
def sieve():
    return numthy.build_spf_sieve(10**6)


def test_spf_matches_trial_division(sieve):
    for n in list(range(2, 5000)) + [999_983, 10**6, 997 * 991]:
        assert sieve[n] == oracles.trial_spf(n)


def test_primes_are_primes(sieve):
    assert sieve.primes[:10].tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(sieve.primes) == 78498


def test_sieve_rejects_bad_limit():
    with pytest.raises(InvalidArgument):
        numthy.build_spf_sieve(1)


def test_out_of_range(sieve):
    with pytest.raises(OutOfRange):
        numthy.distinct_prime_factors(10**6 + 1, sieve)
    with pytest.raises(OutOfRange):
        sieve[1]


def test_factorize_falls_back_past_limit(sieve):
    assert numthy.factorize(10**6 + 3, sieve) == [(10**6 + 3, 1)]


@given(st.integers(1, 10**6))
def test_factorize_roundtrip(n):
    s = numthy.build_spf_sieve(10**6)
    fac = numthy.factorize(n, s)
    assert math.prod(p**e for p, e in fac) == n
    assert [p for p, _ in fac] == oracles.trial_primes(n)


def test_kernel_is_one_iff_square(sieve):
    n = np.arange(1, 10**6 + 1)
    ker = sieve.kernels[1:]
    root = np.sqrt(n).round().astype(np.int64)
    assert np.array_equal(ker == 1, root * root == n)


@given(st.integers(1, 10**6))
def test_kernel_matches_oracle(n):
    s = numthy.build_spf_sieve(10**6)
    k = numthy.squarefree_kernel(n, s)
    assert numthy.is_squarefree(k)
    assert numthy.is_square(n // k) and n % k == 0


def test_euler_criterion_all_small_primes():
    ps = [p for p in range(3, 1000) if oracles.trial_spf(p) == p]
    for p in ps:
        for a in range(p):
            assert numthy.kronecker(a, p) == oracles.euler_criterion(a, p)


@pytest.mark.parametrize("a", range(-60, 61))
def test_kronecker_matches_factoring(a):
    for n in range(1, 200):
        assert numthy.kronecker(a, n) == oracles.kronecker_by_factoring(a, n)


def test_kronecker_multiplicative_in_n_small_grid():
    for a in range(-100, 101):
        for m in range(1, 60):
            for n in range(1, 60):
                assert numthy.kronecker(a, m * n) == numthy.kronecker(a, m) * numthy.kronecker(a, n)


@given(st.integers(-1000, 1000), st.integers(1, 1000), st.integers(1, 1000))
def test_kronecker_multiplicative_in_n(a, m, n):
    assert numthy.kronecker(a, m * n) == numthy.kronecker(a, m) * numthy.kronecker(a, n)


@given(st.integers(-1000, 1000).filter(lambda d: d % 4 in (0, 1) and d != 0), st.integers(1, 10**4))
def test_kronecker_periodic_mod_disc(d, n):
    assert numthy.kronecker(d, n) == numthy.kronecker(d, n + abs(d))


def test_kronecker_rejects_nonpositive_n():
    with pytest.raises(InvalidArgument):
        numthy.kronecker(5, 0)


@pytest.mark.parametrize("a", [-7, -4, 5, 8, 12, 13, -3])
def test_kronecker_column_matches_scalar(a):
    col = numthy.kronecker_column(np.array([a] * 3, dtype=np.int64), 1)
    assert col.tolist() == [1, 1, 1]
    arr = np.arange(-500, 501, dtype=np.int64)
    for n in range(1, 80):
        assert numthy.kronecker_column(arr, n).tolist() == [numthy.kronecker(int(x), n) for x in arr]


@pytest.mark.parametrize("z", [1, 2, 10, 100, 2000])
def test_fundamentals_match_scan(z):
    assert numthy.fundamental_discriminants(z) == oracles.fundamental_scan(z)


def test_fundamental_small_list():
    assert numthy.fundamental_discriminants(13) == [-11, -8, -7, -4, -3, 5, 8, 12, 13]
    assert not numthy.is_fundamental(1)


def test_decompose_identity():
    fund = numthy.fundamental_discriminants(500)
    for d in fund:
        for m in range(1, 21):
            D = d * m * m
            dec = numthy.decompose(D)
            assert (dec.value, dec.fundamental, dec.square_part) == (D, d, m)


@pytest.mark.parametrize("D", [0, 2, 3, 6, 9, 16, 1])
def test_decompose_rejects(D):
    with pytest.raises(InvalidDiscriminant):
        numthy.decompose(D)
