"""Exact moments of quadratic character sums.

``S_k(X, Y)`` is the sum, over non-square discriminants ``D`` with
``|D| <= X``, of ``|sum_{n <= Y} (D/n)|^(2k)``.  Two independent routes
compute it: the direct one walks ``D`` and the decomposed one walks pairs
``(m, d)`` with ``D = d m^2``.  Both reduce to a histogram of the absolute
inner sums, which is merged exactly and only raised to the power ``2k``
at the end in Python integers, so nothing can overflow and the result does
not depend on how work was split across threads.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .errors import InvalidArgument, InvalidDiscriminant
from .numthy import (
    factorize,
    fundamental_array,
    is_square,
    kronecker,
    kronecker_column,
    squarefree_mask,
)

# Work is split into blocks of fixed size regardless of the thread count.
BLOCK = 1 << 16


class Method(str, enum.Enum):
    DIRECT = "direct"
    DECOMPOSED = "decomposed"
    CHI8D = "chi8d"


@dataclass(frozen=True)
class MomentParams:
    k: int
    X: int
    Y: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgument(f"k must be >= 1, got {self.k}")
        if self.X < 1:
            raise InvalidArgument(f"X must be >= 1, got {self.X}")
        if self.Y < 1:
            raise InvalidArgument(f"Y must be >= 1, got {self.Y}")


@dataclass(frozen=True)
class MomentRecord:
    params: MomentParams
    value: int
    method: Method
    wall_seconds: float

    CSV_HEADER = "k,X,Y,method,value,seconds"

    def csv_row(self) -> str:
        p = self.params
        return f"{p.k},{p.X},{p.Y},{self.method.value},{self.value},{self.wall_seconds:.6f}"

    def as_dict(self) -> dict:
        p = self.params
        return {
            "k": p.k,
            "X": p.X,
            "Y": p.Y,
            "method": self.method.value,
            "value": self.value,
            "seconds": self.wall_seconds,
        }


@dataclass(frozen=True)
class FlatSumReport:
    n: int
    z: int
    exact_sum: int
    main_term: float | None
    bound_ratio: float | None


def _check_discriminant(D: int) -> None:
    if D == 0 or D % 4 not in (0, 1) or is_square(D):
        raise InvalidDiscriminant(f"{D} is not a non-square discriminant")


def char_sum(D: int, Y: int) -> int:
    """``sum_{n <= Y} (D/n)`` for a non-square discriminant ``D``."""
    _check_discriminant(D)
    if Y < 1:
        raise InvalidArgument(f"Y must be >= 1, got {Y}")
    return sum(kronecker(D, n) for n in range(1, Y + 1))


def _char_sums(a: np.ndarray, Y: int, coprime_to: int = 1) -> np.ndarray:
    """Inner sums ``sum_{n <= Y, (n, coprime_to) = 1} (a_i / n)`` for each ``a_i``."""
    s = np.zeros(a.shape, dtype=np.int64)
    for n in range(1, Y + 1):
        if coprime_to > 1 and gcd(n, coprime_to) != 1:
            continue
        s += kronecker_column(a, n)
    return s


def _histogram(a: np.ndarray, Y: int, coprime_to: int = 1) -> np.ndarray:
    s = _char_sums(a, Y, coprime_to)
    return np.bincount(np.abs(s), minlength=Y + 1).astype(np.int64)


def _power_sum(hist: np.ndarray, k: int) -> int:
    return sum(int(c) * v ** (2 * k) for v, c in enumerate(hist.tolist()) if c)


def _run_blocks(jobs, Y: int, threads: int) -> np.ndarray:
    """Evaluate histogram jobs and merge them in job order."""
    if threads < 1:
        raise InvalidArgument(f"threads must be >= 1, got {threads}")
    total = np.zeros(Y + 1, dtype=np.int64)
    if threads == 1:
        results = [job() for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda job: job(), jobs))
    for h in results:
        total += h
    return total


def discriminant_array(X: int) -> np.ndarray:
    """All non-square ``D`` with ``|D| <= X`` and ``D = 0, 1 (mod 4)``, sorted."""
    D = np.arange(-X, X + 1, dtype=np.int64)
    D = D[(D % 4 == 0) | (D % 4 == 1)]
    D = D[D != 0]
    pos = D > 0
    root = np.sqrt(D[pos].astype(np.float64)).round().astype(np.int64)
    square = np.zeros(D.shape, dtype=bool)
    square[pos] = root * root == D[pos]
    return D[~square]


def _require_x3(params: MomentParams) -> None:
    if params.X < 3:
        raise InvalidArgument(f"X must be >= 3, got {params.X}")


def moment_direct(params: MomentParams, threads: int = 1) -> MomentRecord:
    _require_x3(params)
    t0 = time.perf_counter()
    D = discriminant_array(params.X)
    jobs = [
        (lambda blk=D[i : i + BLOCK]: _histogram(blk, params.Y))
        for i in range(0, D.shape[0], BLOCK)
    ]
    hist = _run_blocks(jobs, params.Y, threads)
    value = _power_sum(hist, params.k)
    return MomentRecord(params, value, Method.DIRECT, time.perf_counter() - t0)


def _fundamentals_by_abs(z: int) -> tuple[np.ndarray, np.ndarray]:
    d = fundamental_array(z)
    order = np.argsort(np.abs(d), kind="stable")
    d = d[order]
    return d, np.abs(d)


def moment_decomposed(params: MomentParams, threads: int = 1) -> MomentRecord:
    _require_x3(params)
    t0 = time.perf_counter()
    X, Y = params.X, params.Y
    d_sorted, d_abs = _fundamentals_by_abs(X)
    jobs = []
    for m in range(1, isqrt(X) + 1):
        count = int(np.searchsorted(d_abs, X // (m * m), side="right"))
        for i in range(0, count, BLOCK):
            blk = d_sorted[i : min(i + BLOCK, count)]
            jobs.append(lambda blk=blk, m=m: _histogram(blk, Y, coprime_to=m))
    hist = _run_blocks(jobs, Y, threads)
    value = _power_sum(hist, params.k)
    return MomentRecord(params, value, Method.DECOMPOSED, time.perf_counter() - t0)


def moment_8d(params: MomentParams, threads: int = 1) -> MomentRecord:
    """Moment over ``chi_{8d}`` for odd squarefree ``0 < d <= X``; any ``X >= 1``."""
    t0 = time.perf_counter()
    sqf = squarefree_mask(params.X)
    d = np.arange(1, params.X + 1, dtype=np.int64)
    d = d[(d % 2 == 1) & sqf[1:]]
    a = 8 * d
    jobs = [
        (lambda blk=a[i : i + BLOCK]: _histogram(blk, params.Y))
        for i in range(0, a.shape[0], BLOCK)
    ]
    hist = _run_blocks(jobs, params.Y, threads)
    value = _power_sum(hist, params.k)
    return MomentRecord(params, value, Method.CHI8D, time.perf_counter() - t0)


# 1/zeta(2): density of fundamental discriminants counted with both signs
FLAT_DENSITY = 6.0 / math.pi**2


def square_density_factor(n: int) -> float:
    """``prod_{p | n} p / (p + 1)``."""
    out = 1.0
    for p, _ in factorize(n):
        out *= p / (p + 1)
    return out


def flat_char_sum(n: int, z: int, density: float = FLAT_DENSITY) -> FlatSumReport:
    """Sum of ``(d/n)`` over fundamental discriminants ``|d| <= z``.

    For square ``n`` the report carries the main term ``density * z *
    prod_{p|n} p/(p+1)``; otherwise it carries ``|sum| / (z^1/2 n^1/4 log 2n)``.
    """
    if n < 1 or z < 1:
        raise InvalidArgument("n and z must be >= 1")
    d = fundamental_array(z)
    exact = int(kronecker_column(d, n).sum(dtype=np.int64))
    if is_square(n):
        main = density * z * square_density_factor(n)
        return FlatSumReport(n, z, exact, main, None)
    ratio = abs(exact) / (math.sqrt(z) * n**0.25 * math.log(2 * n))
    return FlatSumReport(n, z, exact, None, ratio)


def calibrate_flat_density(zs) -> float:
    """Least-squares slope through the origin of ``#{fundamental |d| <= z}`` against z."""
    zs = [int(z) for z in zs]
    counts = [fundamental_array(z).shape[0] for z in zs]
    return sum(c * z for c, z in zip(counts, zs)) / sum(z * z for z in zs)
