"""Sieves, factorization helpers, the Kronecker symbol and fundamental discriminants.

Conventions: ``d = 1`` is never a fundamental discriminant here, and the
Kronecker symbol is only defined for a positive lower argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

import numba
import numpy as np

from .errors import InvalidArgument, InvalidDiscriminant, OutOfRange


@numba.njit(cache=True)
def _linear_sieve(limit):
    spf = np.zeros(limit + 1, dtype=np.int64)
    primes = np.empty(limit + 1, dtype=np.int64)
    npr = 0
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[npr] = i
            npr += 1
        j = 0
        while j < npr:
            p = primes[j]
            if p > spf[i] or i * p > limit:
                break
            spf[i * p] = p
            j += 1
    return spf, primes[:npr].copy()


@numba.njit(cache=True)
def _kernel_and_phi_ratio(spf):
    limit = spf.shape[0] - 1
    kern = np.ones(limit + 1, dtype=np.int64)
    ratio = np.ones(limit + 1, dtype=np.float64)
    for n in range(2, limit + 1):
        p = spf[n]
        m = n // p
        e = 1
        while m % p == 0:
            m //= p
            e += 1
        kern[n] = kern[m] * p if e % 2 == 1 else kern[m]
        ratio[n] = ratio[m] * (1.0 - 1.0 / p)
    return kern, ratio


@dataclass(frozen=True, eq=False)
class SpfSieve:
    """Smallest-prime-factor table for ``2 <= n <= limit``.

    ``spf[0]`` and ``spf[1]`` are stored as 0. The arrays are read-only.
    """

    limit: int
    spf: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)

    def __getitem__(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise OutOfRange(f"{n} outside sieve range [2, {self.limit}]")
        return int(self.spf[n])

    def _check(self, n: int) -> None:
        if n < 1:
            raise InvalidArgument(f"expected a positive integer, got {n}")
        if n > self.limit:
            raise OutOfRange(f"{n} exceeds sieve limit {self.limit}")

    @property
    def kernels(self) -> np.ndarray:
        """Squarefree kernel of every ``0 <= n <= limit`` (index 0 unused)."""
        return self._tables()[0]

    @property
    def phi_ratios(self) -> np.ndarray:
        """``prod_{p | n} (1 - 1/p)`` for every ``n <= limit``."""
        return self._tables()[1]

    def _tables(self):
        cached = self.__dict__.get("_tables_cache")
        if cached is None:
            kern, ratio = _kernel_and_phi_ratio(self.spf)
            kern.flags.writeable = False
            ratio.flags.writeable = False
            cached = (kern, ratio)
            object.__setattr__(self, "_tables_cache", cached)
        return cached


def build_spf_sieve(limit: int) -> SpfSieve:
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    spf, primes = _linear_sieve(int(limit))
    spf.flags.writeable = False
    primes.flags.writeable = False
    return SpfSieve(int(limit), spf, primes)


def factorize(n: int, sieve: SpfSieve | None = None) -> list[tuple[int, int]]:
    """Prime factorization of ``n >= 1`` as ``[(p, e), ...]`` in increasing p."""
    if n < 1:
        raise InvalidArgument(f"expected a positive integer, got {n}")
    out = []
    if sieve is not None and n <= sieve.limit:
        spf = sieve.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def distinct_prime_factors(n: int, sieve: SpfSieve) -> list[int]:
    sieve._check(n)
    return [p for p, _ in factorize(n, sieve)]


def squarefree_kernel(n: int, sieve: SpfSieve) -> int:
    """Product of the primes dividing ``n`` to an odd power."""
    sieve._check(n)
    out = 1
    for p, e in factorize(n, sieve):
        if e % 2:
            out *= p
    return out


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a/n)`` for ``n >= 1``."""
    if n < 1:
        raise InvalidArgument(f"kronecker symbol needs n >= 1, got {n}")
    if n == 1:
        return 1
    if a % 2 == 0 and n % 2 == 0:
        return 0
    # strip powers of two from n; (a/2) depends on a mod 8
    v = (n & -n).bit_length() - 1
    n >>= v
    result = 1
    if v % 2 == 1 and a % 8 in (3, 5):
        result = -1
    # Jacobi symbol (a/n) for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental(d: int) -> bool:
    if d == 1:
        return False
    r = d % 4
    if r == 1:
        return is_squarefree(d)
    if r == 0:
        N = d // 4
        return N % 4 in (2, 3) and is_squarefree(N)
    return False


@dataclass(frozen=True)
class Discriminant:
    value: int
    fundamental: int
    square_part: int


def decompose(D: int) -> Discriminant:
    """Write a non-square discriminant ``D`` uniquely as ``d * m**2`` with d fundamental."""
    if D == 0 or D % 4 not in (0, 1) or is_square(D):
        raise InvalidDiscriminant(f"{D} is not a non-square discriminant")
    sign = -1 if D < 0 else 1
    core, root = 1, 1
    for p, e in factorize(abs(D)):
        root *= p ** (e // 2)
        if e % 2:
            core *= p
    d = sign * core
    if d % 4 != 1:
        d *= 4
        root //= 2
    if not is_fundamental(d) or d * root * root != D:
        raise InvalidDiscriminant(f"failed to decompose {D}")
    return Discriminant(D, d, root)


@lru_cache(maxsize=8)
def squarefree_mask(limit: int) -> np.ndarray:
    """Boolean array ``mask[n]`` true iff ``n`` is squarefree, ``0 <= n <= limit``."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[0] = False
    for p in range(2, isqrt(limit) + 1):
        mask[p * p :: p * p] = False
    mask.flags.writeable = False
    return mask


@lru_cache(maxsize=8)
def _fundamentals(z: int) -> np.ndarray:
    sqf = squarefree_mask(z)
    d = np.arange(-z, z + 1, dtype=np.int64)
    r = d % 4
    odd_case = (r == 1) & sqf[np.abs(d)] & (d != 1)
    N = d // 4
    even_case = (r == 0) & np.isin(N % 4, (2, 3)) & sqf[np.abs(N)]
    out = d[odd_case | even_case]
    out.flags.writeable = False
    return out


def fundamental_discriminants(z: int) -> list[int]:
    """All fundamental discriminants with ``|d| <= z``, sorted by value."""
    if z < 1:
        raise InvalidArgument(f"z must be >= 1, got {z}")
    return _fundamentals(int(z)).tolist()


def fundamental_array(z: int) -> np.ndarray:
    """Read-only numpy version of :func:`fundamental_discriminants`."""
    if z < 1:
        raise InvalidArgument(f"z must be >= 1, got {z}")
    return _fundamentals(int(z))


@lru_cache(maxsize=4096)
def _prime_table(p: int) -> np.ndarray:
    if p == 2:
        tab = np.array([kronecker(r, 2) for r in range(8)], dtype=np.int8)
    else:
        tab = -np.ones(p, dtype=np.int8)
        tab[(np.arange(1, p, dtype=np.int64) ** 2) % p] = 1
        tab[0] = 0
    tab.flags.writeable = False
    return tab


def kronecker_column(a: np.ndarray, n: int) -> np.ndarray:
    """Vectorized ``(a_i / n)`` for an integer array ``a`` and fixed ``n >= 1``."""
    if n < 1:
        raise InvalidArgument(f"kronecker symbol needs n >= 1, got {n}")
    a = np.asarray(a, dtype=np.int64)
    out = np.ones(a.shape, dtype=np.int8)
    for p, e in factorize(n):
        if e % 2 == 0:
            out *= (a % p != 0).astype(np.int8)
        else:
            tab = _prime_table(p)
            out *= tab[a % tab.shape[0]]
    return out
