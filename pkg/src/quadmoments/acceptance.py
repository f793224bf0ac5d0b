"""The acceptance battery: one function per criterion, each returning a result line."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import charsum, euler, fit, numthy, oracles, squaremult
from .charsum import MomentParams


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s)"


GRID_K = (1, 2, 3)
GRID_X = (10, 10**2, 10**3, 10**4)
GRID_Y = (1, 5, 20)
THREADS = (1, 2, 8)


@lru_cache(maxsize=None)
def _grid(method: str, threads: int) -> dict:
    fn = charsum.moment_direct if method == "direct" else charsum.moment_decomposed
    return {
        (k, X, Y): fn(MomentParams(k, X, Y), threads).value
        for k in GRID_K
        for X in GRID_X
        for Y in GRID_Y
    }


def criterion_1() -> tuple[bool, str]:
    direct = _grid("direct", 1)
    dec = _grid("decomposed", 1)
    bad = [key for key in direct if direct[key] != dec[key]]
    return not bad, f"{len(direct) - len(bad)}/{len(direct)} grid points agree exactly"


def criterion_2() -> tuple[bool, str]:
    ok = True
    for method in ("direct", "decomposed"):
        base = _grid(method, 1)
        for t in THREADS[1:]:
            ok &= _grid(method, t) == base
    return ok, f"threads {THREADS} identical for both methods"


def criterion_3() -> tuple[bool, str]:
    checks = {
        "S_k(10,1)=6": all(
            charsum.moment_direct(MomentParams(k, 10, 1)).value == 6 == oracles.moment_scan(k, 10, 1)
            for k in (1, 2, 3)
        ),
        "S_1(4,2)=1": charsum.moment_direct(MomentParams(1, 4, 2)).value == 1 == oracles.moment_scan(1, 4, 2),
        "flat(1,10)=6": charsum.flat_char_sum(1, 10).exact_sum == 6 == oracles.flat_sum_scan(1, 10),
        "T1(4)=11/3": squaremult.main_term_sum_exact(1, 4).value == Fraction(11, 3),
        "T2(2)=9/2": squaremult.main_term_sum_exact(2, 2).value == Fraction(9, 2),
    }
    failed = [k for k, v in checks.items() if not v]
    return not failed, "all small cases exact" if not failed else f"failed: {failed}"


def criterion_4() -> tuple[bool, str]:
    density = charsum.calibrate_flat_density([10**3, 10**4, 10**5, 10**6])
    ok = True
    parts = []
    for n in (1, 4, 9, 36):
        devs = []
        for z in (10**4, 10**6):
            r = charsum.flat_char_sum(n, z, density)
            devs.append(abs(r.exact_sum - r.main_term) / r.main_term)
        ok &= devs[1] <= 0.05 and devs[1] < devs[0]
        parts.append(f"n={n}: {devs[0]:.2e}->{devs[1]:.2e}")
    return ok, f"density={density:.6f}; " + ", ".join(parts)


def criterion_5() -> tuple[bool, str]:
    zs = (10**3, 10**4, 10**5, 10**6)
    grid = {(n, z): charsum.flat_char_sum(n, z).bound_ratio for n in (2, 3, 5, 6, 10) for z in zs}
    argmax = max(grid, key=grid.get)
    per_n = {n: max(zs, key=lambda z: grid[n, z]) for n in (2, 3, 5, 6, 10)}
    ok = argmax[1] != zs[-1] and all(z != zs[-1] for z in per_n.values())
    return ok, f"grid max {grid[argmax]:.4f} at n={argmax[0]}, z={argmax[1]}; per-n argmax z {per_n}"


def criterion_6() -> tuple[bool, str]:
    a = euler.verify_convolution(1, (1.5, 1.7), 10**4, 10**4)
    b = euler.verify_convolution(1, (3.0, 3.0), 100, 100)
    ok = a.residual <= 1e-3 and b.residual <= 1e-6
    return ok, f"residual(1.5,1.7)={a.residual:.2e} (<=1e-3), residual(3,3)={b.residual:.2e} (<=1e-6)"


def criterion_7() -> tuple[bool, str]:
    prof = euler.e_decay_profile((0.8, 0.8), 10**4)
    ok = prof.max <= 10 * prof.median
    return ok, f"max={prof.max:.4f} min={prof.min:.4f} median={prof.median:.4f}"


DEGREE_Y = tuple(2**i for i in range(10, 23))


def criterion_8() -> tuple[bool, str]:
    sieve = numthy.build_spf_sieve(DEGREE_Y[-1])
    samples = [(Y, squaremult.main_term_sum(1, Y, sieve).value) for Y in DEGREE_Y]
    rep = fit.degree_report(1, samples)
    return rep.passed, (
        f"r2={rep.fit.r_squared:.6f} slope={rep.fit.coefficients[-1]:.5f} "
        f"quadratic marginal={rep.top_marginal:.4f} (<=0.01)"
    )


def criterion_9() -> tuple[bool, str]:
    T = float(squaremult.main_term_sum_exact(1, 10).value)
    devs = []
    for X in (10**4, 10**6):
        S = charsum.moment_direct(MomentParams(1, X, 10)).value
        devs.append(abs(S / X - T) / T)
    ok = devs[1] <= 0.05 and devs[1] < devs[0]
    return ok, f"T1(10)={T:.6f}; deviation {devs[0]:.4f} at 1e4 -> {devs[1]:.4f} at 1e6"


def criterion_10() -> tuple[bool, str]:
    sieve = numthy.build_spf_sieve(60)
    rels = []
    for Y in (10, 30, 60):
        exact = float(squaremult.main_term_sum_exact(2, Y).value)
        rels.append(abs(squaremult.main_term_sum(2, Y, sieve).value - exact) / exact)
    enum_ok = all(
        [t.components for t in squaremult.enumerate_square_tuples(Y, r)] == oracles.square_tuples_scan(Y, r)
        for Y in range(1, 13)
        for r in (2, 4)
    )
    ok = max(rels) <= 1e-10 and enum_ok
    return ok, f"max rel err {max(rels):.1e}; enumeration matches brute force: {enum_ok}"


def criterion_11() -> tuple[bool, str]:
    ok = all(
        euler.eulerian_number(n, 0) == 1
        and sum(euler.eulerian_number(n, j) for j in range(n + 1)) == math.factorial(n)
        for n in range(1, 13)
    )
    worst = max(
        euler.power_sum_identity_check(n, x, 400) for n in range(1, 9) for x in (0.3, 0.5)
    )
    return ok and worst <= 1e-10, f"row sums ok={ok}; max power-sum residual {worst:.1e}"


def criterion_12() -> tuple[bool, str]:
    ok = all(
        (c := fit.exponent_constants(k)).expected_degree == 2 * k * k - k == c.q + c.w - c.rank
        for k in range(1, 11)
    )
    return ok, "expected_degree = 2k^2-k = q+w-rank for k=1..10"


CRITERIA = {
    1: ("dual-path exactness", criterion_1),
    2: ("thread independence", criterion_2),
    3: ("small-case ground truth", criterion_3),
    4: ("flat sum, square n", criterion_4),
    5: ("flat sum, non-square n", criterion_5),
    6: ("Euler product identity", criterion_6),
    7: ("E local decay", criterion_7),
    8: ("degree of Q, k=1", criterion_8),
    9: ("main term S_1/X vs T_1", criterion_9),
    10: ("k=2 oracle equivalence", criterion_10),
    11: ("Eulerian machinery", criterion_11),
    12: ("exponent bookkeeping", criterion_12),
}


def run_criterion(number: int) -> CriterionResult:
    title, fn = CRITERIA[number]
    t0 = time.perf_counter()
    passed, detail = fn()
    return CriterionResult(number, title, bool(passed), detail, time.perf_counter() - t0)


def run_all(echo=print) -> list[CriterionResult]:
    results = []
    for number in CRITERIA:
        res = run_criterion(number)
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
