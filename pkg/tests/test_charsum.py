import math

import pytest
from hypothesis import given, strategies as st

from quadmoments import charsum, oracles
from quadmoments.charsum import MomentParams
from quadmoments.errors import InvalidArgument, InvalidDiscriminant


@pytest.mark.parametrize("D", [-23, -20, -4, -3, 5, 8, 12, 17, 20, 21, 28, 45])
def test_char_sum_matches_oracle(D):
    for Y in (1, 2, 7, 30):
        assert charsum.char_sum(D, Y) == sum(oracles.kronecker_by_factoring(D, n) for n in range(1, Y + 1))


@pytest.mark.parametrize("D", [0, 2, 9, 16])
def test_char_sum_rejects(D):
    with pytest.raises(InvalidDiscriminant):
        charsum.char_sum(D, 5)


@pytest.mark.parametrize("k,X,Y", [(1, 3, 1), (1, 10, 1), (1, 4, 2), (2, 50, 5), (3, 40, 7), (1, 200, 13), (2, 150, 20)])
def test_moment_direct_vs_scan(k, X, Y):
    assert charsum.moment_direct(MomentParams(k, X, Y)).value == oracles.moment_scan(k, X, Y)


def test_small_ground_truth():
    for k in (1, 2, 3):
        assert charsum.moment_direct(MomentParams(k, 10, 1)).value == 6
    assert charsum.moment_direct(MomentParams(1, 4, 2)).value == 1
    assert charsum.moment_direct(MomentParams(1, 100, 5)).value == 316


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("X", [10, 100, 1000, 10**4])
@pytest.mark.parametrize("Y", [1, 5, 20])
def test_dual_path_grid(k, X, Y):
    p = MomentParams(k, X, Y)
    assert charsum.moment_direct(p).value == charsum.moment_decomposed(p).value


@given(st.integers(1, 3), st.integers(3, 3000), st.integers(1, 40))
def test_dual_path_random(k, X, Y):
    p = MomentParams(k, X, Y)
    assert charsum.moment_direct(p).value == charsum.moment_decomposed(p).value


def test_dual_path_across_blocks():
    # several 2^16 blocks on both routes
    p = MomentParams(1, 10**6, 10)
    a = charsum.moment_direct(p, threads=4).value
    assert a == charsum.moment_decomposed(p, threads=3).value == 10178133


@pytest.mark.parametrize("fn", [charsum.moment_direct, charsum.moment_decomposed, charsum.moment_8d])
def test_thread_independence(fn):
    p = MomentParams(2, 3 * 10**5, 17)
    base = fn(p, threads=1).value
    for t in (2, 3, 8):
        assert fn(p, threads=t).value == base


@given(st.integers(1, 3), st.integers(3, 500), st.integers(1, 30))
def test_monotone_in_X_and_Y(k, X, Y):
    v = charsum.moment_direct(MomentParams(k, X, Y)).value
    assert charsum.moment_direct(MomentParams(k, X + 1, Y)).value >= v
    # S_{k+1} >= S_k term by term, since every |inner sum| is an integer
    assert charsum.moment_direct(MomentParams(k + 1, X, Y)).value >= v


@pytest.mark.parametrize("k,X,Y", [(1, 1, 1), (1, 5, 1), (1, 10, 3), (2, 30, 8), (1, 200, 11)])
def test_moment_8d_vs_scan(k, X, Y):
    assert charsum.moment_8d(MomentParams(k, X, Y)).value == oracles.moment_8d_scan(k, X, Y)


def test_moment_8d_small_values():
    # d = 1, 3, 5 -> sums 1, 1, 1 at Y = 1
    assert charsum.moment_8d(MomentParams(1, 5, 1)).value == 3
    assert charsum.moment_8d(MomentParams(1, 10, 3)).value == 5


@pytest.mark.parametrize("bad", [dict(k=0, X=10, Y=1), dict(k=1, X=0, Y=1), dict(k=1, X=10, Y=0)])
def test_params_validation(bad):
    with pytest.raises(InvalidArgument):
        MomentParams(**bad)


def test_direct_needs_x3():
    with pytest.raises(InvalidArgument):
        charsum.moment_direct(MomentParams(1, 2, 1))


def test_record_csv():
    r = charsum.moment_direct(MomentParams(1, 10, 1))
    assert charsum.MomentRecord.CSV_HEADER == "k,X,Y,method,value,seconds"
    assert r.csv_row().startswith("1,10,1,direct,6,")


@pytest.mark.parametrize("n,z", [(1, 10), (4, 10), (2, 50), (3, 100), (6, 300), (9, 1000), (35, 500)])
def test_flat_sum_vs_scan(n, z):
    assert charsum.flat_char_sum(n, z).exact_sum == oracles.flat_sum_scan(n, z)


def test_flat_sum_report_fields():
    sq = charsum.flat_char_sum(4, 10)
    assert sq.exact_sum == 3 and sq.bound_ratio is None
    assert sq.main_term == pytest.approx(6 / math.pi**2 * 10 * 2 / 3)
    ns = charsum.flat_char_sum(2, 10)
    assert ns.main_term is None and ns.bound_ratio >= 0


def test_density_is_inverse_zeta2():
    assert charsum.calibrate_flat_density([10**3, 10**4, 10**5, 10**6]) == pytest.approx(6 / math.pi**2, rel=1e-3)


def test_square_density_factor():
    assert charsum.square_density_factor(1) == 1
    assert charsum.square_density_factor(36) == pytest.approx(2 / 3 * 3 / 4)
