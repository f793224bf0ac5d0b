"""The multiplicative weight f on tuples with square product, and its box sums.

    f(n_1, ..., n_r) = prod_{p | n_1...n_r} (1 - 1/p)   if n_1...n_r is a square
                     = 0                                 otherwise

``T_k(Y)`` is the sum of f over ``[1, Y]^(2k)``.  Squareness is tracked
through the squarefree kernel of the running product, never the product
itself.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, isqrt
from typing import Iterator

import numba
import numpy as np

from .errors import InvalidArgument, OutOfRange, TooLarge
from .numthy import SpfSieve, build_spf_sieve, factorize

# first-coordinate blocks; fixed so the float merge order never depends on threads
N1_BLOCK = 64
KAPPA_BLOCK = 4096

EXACT_LIMITS = {1: 200, 2: 60}
EXACT_MAX_SCANS = 10**9


@dataclass(frozen=True)
class SquareTuple:
    components: tuple[int, ...]
    weight: Fraction


@dataclass(frozen=True)
class MainTermSum:
    k: int
    Y: int
    value: float | Fraction
    tuple_count: int
    seconds: float = 0.0


def _prime_set(components, sieve: SpfSieve | None) -> set[int]:
    out: set[int] = set()
    for n in components:
        out.update(p for p, _ in factorize(n, sieve))
    return out


def _weight(primes) -> Fraction:
    w = Fraction(1)
    for p in primes:
        w *= Fraction(p - 1, p)
    return w


def f_eval(components, sieve: SpfSieve) -> Fraction:
    """Exact value of f; squareness is decided by xor-ing kernels."""
    kern = 1
    for n in components:
        if n < 1:
            raise InvalidArgument(f"components must be positive, got {n}")
        if n > sieve.limit:
            raise OutOfRange(f"{n} exceeds sieve limit {sieve.limit}")
        kn = int(sieve.kernels[n]) if n > 1 else 1
        g = gcd(kern, kn)
        kern = (kern // g) * (kn // g)
    if kern != 1:
        return Fraction(0)
    return _weight(_prime_set(components, sieve))


def enumerate_square_tuples(Y: int, r: int) -> Iterator[SquareTuple]:
    """Yield every tuple in ``[1, Y]^r`` with square product, in lexicographic order."""
    if Y < 1:
        raise InvalidArgument(f"Y must be >= 1, got {Y}")
    if r < 2 or r % 2:
        raise InvalidArgument(f"r must be a positive even integer, got {r}")
    sieve = build_spf_sieve(max(Y, 2))
    kern = sieve.kernels
    primes_of = [()] + [tuple(p for p, _ in factorize(n, sieve)) for n in range(1, Y + 1)]

    def rec(prefix, kappa, primes):
        pos = len(prefix)
        remaining = r - pos
        if remaining == 1:
            if kappa > Y:
                return
            j = 1
            while kappa * j * j <= Y:
                n = kappa * j * j
                yield SquareTuple(prefix + (n,), _weight(primes.union(primes_of[n])))
                j += 1
            return
        bound = Y ** (remaining - 1)
        for n in range(1, Y + 1):
            kn = int(kern[n]) if n > 1 else 1
            g = gcd(kappa, kn)
            nk = (kappa // g) * (kn // g)
            if nk <= bound:
                yield from rec(prefix + (n,), nk, primes.union(primes_of[n]))

    yield from rec((), 1, frozenset())


@numba.njit(cache=True, nogil=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@numba.njit(cache=True, nogil=True)
def _square_tuple_sum(Y, r, spf, kern, n_lo, n_hi, exps):
    """Neumaier-compensated sum of f(n) * prod n_i^(-exps_i) over square tuples.

    The first coordinate is restricted to ``n_lo <= n_1 < n_hi``.  Returns
    ``(sum, count)``.
    """
    cap = np.int64(1) << np.int64(62)
    ypow = np.empty(r + 1, dtype=np.int64)
    ypow[0] = 1
    for i in range(1, r + 1):
        if ypow[i - 1] > cap // Y:
            ypow[i] = cap
        else:
            ypow[i] = ypow[i - 1] * Y
    marks = np.zeros(Y + 1, dtype=np.int32)
    n = np.zeros(r, dtype=np.int64)
    kap = np.ones(r + 1, dtype=np.int64)
    w = np.ones(r + 1, dtype=np.float64)
    total = 0.0
    comp = 0.0
    count = 0
    pos = 0
    n[0] = n_lo - 1
    while pos >= 0:
        if pos == r - 1:
            K = kap[pos]
            if K <= Y:
                j = 1
                while K * j * j <= Y:
                    m = K * j * j
                    ww = w[pos]
                    x = j
                    while x > 1:
                        p = spf[x]
                        if marks[p] == 0:
                            ww *= 1.0 - 1.0 / p
                        while x % p == 0:
                            x //= p
                    if exps[pos] != 0.0:
                        ww *= float(m) ** (-exps[pos])
                    t = total + ww
                    if abs(total) >= abs(ww):
                        comp += (total - t) + ww
                    else:
                        comp += (ww - t) + total
                    total = t
                    count += 1
                    j += 1
            pos -= 1
            if pos >= 0:
                x = n[pos]
                while x > 1:
                    p = spf[x]
                    marks[p] -= 1
                    while x % p == 0:
                        x //= p
            continue
        limit = n_hi - 1 if pos == 0 else Y
        nxt = n[pos] + 1
        newK = 0
        found = False
        bound = ypow[r - pos - 1]
        K = kap[pos]
        while nxt <= limit:
            kn = kern[nxt]
            g = _gcd(K, kn)
            a = K // g
            b = kn // g
            if a <= bound // b:
                newK = a * b
                if newK <= bound:
                    found = True
                    break
            nxt += 1
        if not found:
            pos -= 1
            if pos >= 0:
                x = n[pos]
                while x > 1:
                    p = spf[x]
                    marks[p] -= 1
                    while x % p == 0:
                        x //= p
            continue
        n[pos] = nxt
        kap[pos + 1] = newK
        ww = w[pos]
        if exps[pos] != 0.0:
            ww *= float(nxt) ** (-exps[pos])
        x = nxt
        while x > 1:
            p = spf[x]
            if marks[p] == 0:
                ww *= 1.0 - 1.0 / p
            marks[p] += 1
            while x % p == 0:
                x //= p
        w[pos + 1] = ww
        pos += 1
        if pos < r - 1:
            n[pos] = 0
    return total + comp, count


@numba.njit(cache=True, nogil=True)
def _bucket_sum(Y, kern, ratio, k_lo, k_hi):
    """T_1 restricted to kernels ``k_lo <= kappa < k_hi``: pairs (kappa a^2, kappa b^2)."""
    total = 0.0
    comp = 0.0
    count = 0
    for kappa in range(k_lo, k_hi):
        if kappa > Y or kern[kappa] != kappa:
            continue
        M = np.int64(np.sqrt(Y // kappa))
        while (M + 1) * (M + 1) <= Y // kappa:
            M += 1
        while M * M > Y // kappa:
            M -= 1
        for a in range(1, M + 1):
            ka = kappa * a
            hka = ratio[ka]
            for b in range(1, M + 1):
                # h(rad(xy)) = h(x) h(y) / h(gcd(x, y))
                v = hka * ratio[b] / ratio[_gcd(ka, b)]
                t = total + v
                if abs(total) >= abs(v):
                    comp += (total - t) + v
                else:
                    comp += (v - t) + total
                total = t
                count += 1
    return total + comp, count


def _map_blocks(fn, ranges, threads: int):
    if threads < 1:
        raise InvalidArgument(f"threads must be >= 1, got {threads}")
    if threads == 1:
        return [fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda lh: fn(*lh), ranges))


def _ranges(lo: int, hi: int, step: int):
    return [(a, min(a + step, hi)) for a in range(lo, hi, step)]


def weighted_square_sum(Y: int, exps, sieve: SpfSieve, threads: int = 1) -> tuple[float, int]:
    """Sum of ``f(n) * prod n_i^(-exps_i)`` over square tuples in ``[1, Y]^len(exps)``."""
    r = len(exps)
    if r < 2 or r % 2:
        raise InvalidArgument(f"need an even number of variables, got {r}")
    if Y > sieve.limit:
        raise OutOfRange(f"Y={Y} exceeds sieve limit {sieve.limit}")
    e = np.asarray(exps, dtype=np.float64)
    spf, kern = sieve.spf, sieve.kernels
    parts = _map_blocks(
        lambda lo, hi: _square_tuple_sum(Y, r, spf, kern, lo, hi, e),
        _ranges(1, Y + 1, N1_BLOCK),
        threads,
    )
    return math.fsum(p[0] for p in parts), sum(p[1] for p in parts)


def _check_k_y(k: int, Y: int, sieve: SpfSieve) -> None:
    if k < 1:
        raise InvalidArgument(f"k must be >= 1, got {k}")
    if Y < 1:
        raise InvalidArgument(f"Y must be >= 1, got {Y}")
    if Y > sieve.limit:
        raise OutOfRange(f"Y={Y} exceeds sieve limit {sieve.limit}")


def main_term_sum(
    k: int, Y: int, sieve: SpfSieve, threads: int = 1, method: str = "auto"
) -> MainTermSum:
    """Floating-point ``T_k(Y)``.

    ``method`` is ``"buckets"`` (k = 1 only), ``"enumerate"``, or ``"auto"``,
    which picks buckets whenever k = 1.
    """
    _check_k_y(k, Y, sieve)
    if method == "auto":
        method = "buckets" if k == 1 else "enumerate"
    t0 = time.perf_counter()
    if method == "buckets":
        if k != 1:
            raise InvalidArgument("the kernel-bucket path only handles k = 1")
        kern, ratio = sieve.kernels, sieve.phi_ratios
        parts = _map_blocks(
            lambda lo, hi: _bucket_sum(Y, kern, ratio, lo, hi),
            _ranges(1, Y + 1, KAPPA_BLOCK),
            threads,
        )
        value = math.fsum(p[0] for p in parts)
        count = sum(p[1] for p in parts)
    elif method == "enumerate":
        value, count = weighted_square_sum(Y, [0.0] * (2 * k), sieve, threads)
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    return MainTermSum(k, Y, value, count, time.perf_counter() - t0)


def main_term_sum_exact(k: int, Y: int, sieve: SpfSieve | None = None) -> MainTermSum:
    """Exact rational ``T_k(Y)`` by scanning all of ``[1, Y]^(2k)``.

    Squareness is decided from the full product with an integer square root
    and weights come from the primes of the product, so this shares nothing
    with the kernel-based paths.
    """
    if k < 1 or Y < 1:
        raise InvalidArgument("k and Y must be >= 1")
    r = 2 * k
    if Y > EXACT_LIMITS.get(k, Y) or Y**r > EXACT_MAX_SCANS:
        raise TooLarge(f"exact enumeration refused for k={k}, Y={Y}")
    if sieve is not None:
        _check_k_y(k, Y, sieve)
    t0 = time.perf_counter()
    primes = [p for p in range(2, Y + 1) if all(p % q for q in range(2, isqrt(p) + 1))]
    values = np.arange(1, Y + 1, dtype=np.int64)
    masks = np.zeros(Y, dtype=np.int64)
    for i, p in enumerate(primes):
        masks[values % p == 0] |= np.int64(1) << i

    counts: dict[int, int] = {}
    # the leading r-2 coordinates are looped in Python, the last two vectorized
    lead = r - 2
    grid_prod = np.multiply.outer(values, values).ravel()
    grid_mask = np.bitwise_or.outer(masks, masks).ravel()
    for head in product(range(Y), repeat=lead):
        prod_head = 1
        mask_head = 0
        for i in head:
            prod_head *= int(values[i])
            mask_head |= int(masks[i])
        full = grid_prod * prod_head
        root = np.sqrt(full.astype(np.float64)).round().astype(np.int64)
        sq = root * root == full
        if not sq.any():
            continue
        uniq, cnt = np.unique(grid_mask[sq] | mask_head, return_counts=True)
        for u, c in zip(uniq.tolist(), cnt.tolist()):
            counts[u] = counts.get(u, 0) + c

    total = Fraction(0)
    for mask, c in counts.items():
        w = Fraction(1)
        for i, p in enumerate(primes):
            if mask >> i & 1:
                w *= Fraction(p - 1, p)
        total += c * w
    return MainTermSum(k, Y, total, sum(counts.values()), time.perf_counter() - t0)
