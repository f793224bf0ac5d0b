import math
from itertools import product

import mpmath
import pytest
from hypothesis import given, strategies as st

from quadmoments import euler, oracles
from quadmoments.errors import InvalidArgument, OutOfDomain


@pytest.mark.parametrize("s", [1.01, 1.1, 1.5, 2.0, 2.5, 3.0, 7.5, 20.0])
def test_zeta_vs_mpmath(s):
    val, err = euler.zeta_real_with_error(s)
    assert val == pytest.approx(float(mpmath.zeta(s)), rel=1e-13)
    assert err < 1e-12


@pytest.mark.parametrize("s", [1.0, 0.5, -2.0])
def test_zeta_domain(s):
    with pytest.raises(OutOfDomain):
        euler.zeta_real(s)


def test_shift_point():
    sp = euler.ShiftPoint((1.5, 1.7))
    assert sp.k == 1 and sp.sigma_min == 1.5
    assert sp.shifted(-0.5).s == (1.0, 1.2)
    with pytest.raises(InvalidArgument):
        euler.ShiftPoint((1.0, 1.0, 1.0))


def _brute_F(p, s, cap):
    # sum over v in [0, cap]^r with |v| even of p^(-v.s), times (1 - 1/p), plus 1
    r = len(s)
    tot = 0.0
    for v in product(range(cap + 1), repeat=r):
        if sum(v) and sum(v) % 2 == 0:
            tot += p ** (-sum(a * b for a, b in zip(v, s)))
    return 1 + (1 - 1 / p) * tot


@pytest.mark.parametrize("p", [2, 3, 5, 101])
@pytest.mark.parametrize("s", [(1.5, 1.7), (2.0, 3.0), (1.2, 1.3, 1.4, 1.5)])
def test_local_F_three_ways(p, s):
    trunc = euler.local_factor_F(p, s, max_weight=None)
    closed = euler.local_factor_F_closed(p, s)
    assert trunc == pytest.approx(closed, rel=1e-14)
    cap = math.ceil(9 / (min(s) * math.log10(p)))
    assert _brute_F(p, s, cap) == pytest.approx(closed, rel=1e-8)


@given(st.sampled_from([2, 3, 7, 29]), st.floats(0.6, 3.0), st.floats(0.6, 3.0), st.sampled_from([10, 20, 40]))
def test_truncation_bound_is_honest(p, a, b, w):
    s = (a, b)
    err = abs(euler.local_factor_F(p, s, max_weight=w) - euler.local_factor_F_closed(p, s))
    assert err <= euler.truncation_bound(p, min(s), 2, w) * (1 + 1e-9) + 1e-15


def test_local_E_is_F_times_zeta_inverse():
    rep = euler.local_factor_E(3, (0.8, 0.9), None)
    assert rep.E_local == pytest.approx(rep.F_local * euler.zeta_local_inverse(3, (0.8, 0.9)))
    assert rep.zeta_locals * euler.zeta_local_inverse(3, (0.8, 0.9)) == pytest.approx(1.0)


def test_local_E_domain():
    with pytest.raises(OutOfDomain):
        euler.local_factor_E(3, (0.0, 1.0))


@pytest.mark.parametrize("s", [(2.0, 2.0), (1.5, 2.5), (1.3, 1.3, 1.4, 1.6)])
def test_E_deviation_order(s):
    # weight-two terms cancel up to the factor 1/p, weight four is left whole
    sigma, r = min(s), len(s)
    for p in euler.primes_up_to(500):
        dev = abs(euler.local_factor_E(p, s, None).E_local - 1)
        assert dev <= 4 * math.comb(r + 3, 4) * (p ** (-1 - 2 * sigma) + p ** (-4 * sigma))


def test_euler_product_converges():
    vals = [euler.euler_product_E((0.8, 0.8), L) for L in (100, 1000, 10**4)]
    assert vals == pytest.approx([0.457599, 0.457493, 0.457491], abs=2e-6)


def test_convolution_k1():
    rep = euler.verify_convolution(1, (1.5, 1.7), 10**4, 10**4)
    assert rep.residual <= 1e-3
    assert rep.residual <= rep.truncation_budget


def test_convolution_k2():
    rep = euler.verify_convolution(2, (1.5, 1.5, 1.5, 1.5), 200, 1000)
    assert rep.residual <= rep.truncation_budget


def test_convolution_rejects():
    with pytest.raises(InvalidArgument):
        euler.verify_convolution(3, (2,) * 6, 10, 10)
    with pytest.raises((InvalidArgument, OutOfDomain)):
        euler.verify_convolution(1, (1.0, 2.0), 10, 10)


@pytest.mark.parametrize("n", range(0, 9))
def test_eulerian_vs_descents(n):
    assert [euler.eulerian_number(n, j) for j in range(n + 1)] == oracles.eulerian_by_descents(n)


@pytest.mark.parametrize("n", range(1, 31))
def test_eulerian_symmetry_and_rowsum(n):
    row = [euler.eulerian_number(n, j) for j in range(n + 1)]
    assert sum(row) == math.factorial(n)
    assert row[:n] == row[:n][::-1]
    assert row[0] == 1 and row[n] == 0


def test_eulerian_bounds():
    with pytest.raises(InvalidArgument):
        euler.eulerian_number(31, 0)
    with pytest.raises(InvalidArgument):
        euler.eulerian_number(3, 4)


@given(st.integers(1, 8), st.floats(0.05, 0.6))
def test_power_sum_identity(n, x):
    assert euler.power_sum_identity_check(n, x, 400) <= 1e-10 * max(1.0, x / (1 - x) ** (n + 1))


def test_power_sum_needs_long_series():
    with pytest.raises(InvalidArgument):
        euler.power_sum_identity_check(3, 0.9, 10)


def test_tail_weight_bound():
    assert euler.tail_weight_bound_check(101, 1.0, 1) == pytest.approx(
        sum((1 - 1 / 101) * (w + 1) * 101.0 ** (-(w - 4)) for w in range(4, 200, 2))
    )
    with pytest.raises(OutOfDomain):
        euler.tail_weight_bound_check(3, 0.25, 1)


def test_decay_profile_bounded():
    prof = euler.e_decay_profile((0.8, 0.8), 10**4)
    assert prof.max <= 10 * prof.median
    assert prof.evaluated_at == pytest.approx((0.3, 0.3))
