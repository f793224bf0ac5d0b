"""Slow reference implementations used to pin expected values.

Each one follows the defining formula as literally as possible and shares
no code path with the fast routines it checks.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import isqrt


def trial_spf(n: int) -> int:
    for p in range(2, isqrt(n) + 1):
        if n % p == 0:
            return p
    return n


def trial_primes(n: int) -> list[int]:
    out, p = [], 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


def euler_criterion(a: int, p: int) -> int:
    """Legendre symbol of ``a`` mod an odd prime ``p`` via ``a^((p-1)/2)``."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def kronecker_by_factoring(a: int, n: int) -> int:
    """Kronecker symbol from the prime factorization of ``n`` and Euler's criterion."""
    out = 1
    m = n
    p = 2
    while m > 1:
        while m % p == 0:
            m //= p
            if p == 2:
                out *= 0 if a % 2 == 0 else (1 if a % 8 in (1, 7) else -1)
            else:
                out *= euler_criterion(a, p)
        p += 1
    return out


def _squarefree(n: int) -> bool:
    n = abs(n)
    return n > 0 and all(n % (p * p) for p in range(2, isqrt(n) + 1))


def fundamental_scan(z: int) -> list[int]:
    out = []
    for d in range(-z, z + 1):
        if d == 1:
            continue
        if d % 4 == 1 and _squarefree(d):
            out.append(d)
        elif d % 4 == 0 and (d // 4) % 4 in (2, 3) and _squarefree(d // 4):
            out.append(d)
    return out


def moment_scan(k: int, X: int, Y: int) -> int:
    total = 0
    for D in range(-X, X + 1):
        if D == 0 or D % 4 not in (0, 1) or (D > 0 and isqrt(D) ** 2 == D):
            continue
        s = sum(kronecker_by_factoring(D, n) for n in range(1, Y + 1))
        total += s ** (2 * k)
    return total


def moment_8d_scan(k: int, X: int, Y: int) -> int:
    total = 0
    for d in range(1, X + 1, 2):
        if not _squarefree(d):
            continue
        s = sum(kronecker_by_factoring(8 * d, n) for n in range(1, Y + 1))
        total += s ** (2 * k)
    return total


def flat_sum_scan(n: int, z: int) -> int:
    return sum(kronecker_by_factoring(d, n) for d in fundamental_scan(z))


def f_direct(components) -> Fraction:
    prod = 1
    for c in components:
        prod *= c
    if isqrt(prod) ** 2 != prod:
        return Fraction(0)
    w = Fraction(1)
    for p in trial_primes(prod):
        w *= Fraction(p - 1, p)
    return w


def square_tuples_scan(Y: int, r: int) -> list[tuple[int, ...]]:
    out = []
    for t in product(range(1, Y + 1), repeat=r):
        prod = 1
        for c in t:
            prod *= c
        if isqrt(prod) ** 2 == prod:
            out.append(t)
    return out


def eulerian_by_descents(n: int) -> list[int]:
    """Count permutations of ``range(n)`` by number of descents."""
    from itertools import permutations

    counts = [0] * (n + 1)
    for perm in permutations(range(n)):
        counts[sum(perm[i] > perm[i + 1] for i in range(n - 1))] += 1
    return counts
