"""Euler products for the Dirichlet series of f at real shifts.

The local factor at p is

    F_p(s) = 1 + (1 - 1/p) * sum_{v != 0, |v| even} p^(-v.s)

and ``E_p(s) = F_p(s) * prod_j (1 - p^(-2 s_j)) * prod_{l<m} (1 - p^(-(s_l + s_m)))``.
Truncations in the total weight ``|v|`` come with an explicit tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import InvalidArgument, OutOfDomain
from .numthy import build_spf_sieve
from .squaremult import weighted_square_sum

DEFAULT_MAX_WEIGHT = 40
AUTO_WEIGHT_TOL = 1e-16
AUTO_WEIGHT_CAP = 4000


# --- zeta ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_even(m: int) -> tuple[Fraction, ...]:
    """B_2, B_4, ..., B_2m."""
    B = [Fraction(1)]
    for n in range(1, 2 * m + 1):
        B.append(-sum(comb(n + 1, j) * B[j] for j in range(n)) / (n + 1))
    return tuple(B[2 * j] for j in range(1, m + 1))


def zeta_real_with_error(s: float, N: int = 20, terms: int = 30) -> tuple[float, float]:
    """Euler-Maclaurin value of zeta(s) for real ``s > 1`` and a bound on the remainder.

    The remainder for real s is bounded by the first omitted correction term.
    """
    if not s > 1:
        raise OutOfDomain(f"zeta_real needs s > 1, got {s}")
    parts = [n ** (-s) for n in range(1, N)]
    parts.append(N ** (1 - s) / (s - 1))
    parts.append(0.5 * N ** (-s))
    bern = _bernoulli_even(terms + 1)
    rising = s  # s (s+1) ... (s+2j-2)
    err = math.inf
    for j in range(1, terms + 2):
        term = float(bern[j - 1]) / math.factorial(2 * j) * rising * N ** (-s - 2 * j + 1)
        if j == terms + 1 or abs(term) < 1e-18:
            err = abs(term)
            break
        parts.append(term)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return math.fsum(parts), err


def zeta_real(s: float) -> float:
    value, err = zeta_real_with_error(s)
    if err > 1e-12:
        raise OutOfDomain(f"zeta({s}) remainder bound {err:.3g} too large")
    return value


# --- local factors -------------------------------------------------------


@dataclass(frozen=True)
class ShiftPoint:
    s: tuple[float, ...]
    sigma_min: float = field(init=False)

    def __post_init__(self):
        s = tuple(float(x) for x in self.s)
        if not s or len(s) % 2:
            raise InvalidArgument(f"need an even number of shifts, got {len(s)}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "sigma_min", min(s))

    @property
    def k(self) -> int:
        return len(self.s) // 2

    def shifted(self, delta: float) -> "ShiftPoint":
        return ShiftPoint(tuple(x + delta for x in self.s))


@dataclass(frozen=True)
class LocalFactorReport:
    p: int
    F_local: float
    zeta_locals: float
    E_local: float
    max_weight: int
    truncation_error: float


def _as_shift(s) -> ShiftPoint:
    return s if isinstance(s, ShiftPoint) else ShiftPoint(tuple(s))


def weight_count(weight: int, r: int) -> int:
    """Number of ``v`` in ``N_0^r`` with ``|v| = weight``."""
    return comb(weight + r - 1, r - 1)


def truncation_bound(p: int, sigma: float, r: int, max_weight: int) -> float:
    """Bound on ``(1 - 1/p) sum_{|v| even > max_weight} p^(-v.s)`` when every s_j >= sigma."""
    x = p ** (-sigma)
    total = 0.0
    w = max_weight + 2
    while True:
        term = (1 - 1 / p) * weight_count(w, r) * x**w
        total += term
        # ratio of consecutive even-weight terms falls below 1/2 eventually
        nxt = weight_count(w + 2, r) * x ** (w + 2) * (1 - 1 / p)
        if nxt < 0.5 * term and nxt <= 1e-17 * total:
            # consecutive ratios only shrink from here: geometric majorant
            return total + 2 * nxt
        if w > 100000:
            return math.inf
        w += 2


def _auto_weight(p: int, sigma: float, r: int) -> int:
    w = DEFAULT_MAX_WEIGHT
    while w < AUTO_WEIGHT_CAP and truncation_bound(p, sigma, r, w) > AUTO_WEIGHT_TOL:
        w += 20
    return w


def _weight_coefficients(p: int, s: tuple[float, ...], max_weight: int) -> np.ndarray:
    """c[w] = sum_{|v| = w} p^(-v.s) for 0 <= w <= max_weight."""
    coeffs = np.zeros(max_weight + 1)
    coeffs[0] = 1.0
    for sj in s:
        x = p ** (-sj)
        # multiply by 1/(1 - x t): running recurrence c[w] += x c[w-1]
        for w in range(1, max_weight + 1):
            coeffs[w] += x * coeffs[w - 1]
    return coeffs


def local_factor_F(p: int, s, max_weight: int | None = DEFAULT_MAX_WEIGHT) -> float:
    return _local_F(p, _as_shift(s), max_weight)[0]


def _local_F(p: int, sp: ShiftPoint, max_weight: int | None) -> tuple[float, int, float]:
    if sp.sigma_min <= 0:
        raise OutOfDomain("local factors need every shift > 0")
    r = len(sp.s)
    if max_weight is None:
        max_weight = _auto_weight(p, sp.sigma_min, r)
    if max_weight < 2 or max_weight % 2:
        raise InvalidArgument(f"max_weight must be even and >= 2, got {max_weight}")
    c = _weight_coefficients(p, sp.s, max_weight)
    value = 1.0 + (1.0 - 1.0 / p) * math.fsum(c[2::2].tolist())
    return value, max_weight, truncation_bound(p, sp.sigma_min, r, max_weight)


def zeta_local_inverse(p: int, s) -> float:
    """``prod_j (1 - p^(-2 s_j)) * prod_{l<m} (1 - p^(-(s_l + s_m)))``."""
    s = _as_shift(s).s
    out = 1.0
    for sj in s:
        out *= 1.0 - p ** (-2 * sj)
    for a, b in combinations(s, 2):
        out *= 1.0 - p ** (-(a + b))
    return out


def local_factor_E(p: int, s, max_weight: int | None = DEFAULT_MAX_WEIGHT) -> LocalFactorReport:
    """Local factor of E at p.

    Shifts only need to be positive: every factor is finite there, which
    also covers the region ``1/4 < s_j <= 1/2`` where E but not F converges
    globally.  ``max_weight=None`` picks a truncation with tail below 1e-16.
    """
    sp = _as_shift(s)
    F, mw, err = _local_F(p, sp, max_weight)
    inv = zeta_local_inverse(p, sp)
    return LocalFactorReport(p, F, 1.0 / inv, F * inv, mw, err * inv)


def local_factor_F_closed(p: int, s) -> float:
    """Untruncated F_p via the even part of ``prod_j 1/(1 - x_j t)`` at t = +-1."""
    x = [p ** (-sj) for sj in _as_shift(s).s]
    plus = math.prod(1 / (1 - xi) for xi in x)
    minus = math.prod(1 / (1 + xi) for xi in x)
    return 1 + (1 - 1 / p) * ((plus + minus) / 2 - 1)


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    return build_spf_sieve(n).primes.tolist()


def euler_product_E(s, prime_limit: int, max_weight: int | None = DEFAULT_MAX_WEIGHT) -> float:
    """``prod_{p <= prime_limit} E_p(s)``, accumulated in log space."""
    sp = _as_shift(s)
    return math.exp(
        math.fsum(math.log(local_factor_E(p, sp, max_weight).E_local) for p in primes_up_to(prime_limit))
    )


@dataclass(frozen=True)
class ConvolutionReport:
    k: int
    s: tuple[float, ...]
    coeff_limit: int
    prime_limit: int
    lhs: float
    rhs: float
    residual: float
    truncation_budget: float

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "s": list(self.s),
            "coeff_limit": self.coeff_limit,
            "prime_limit": self.prime_limit,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "truncation_budget": self.truncation_budget,
        }


def _prime_tail(sp: ShiftPoint, prime_limit: int) -> float:
    """Bound on ``|log prod_{p > P} E_p|`` from ``|E_p - 1| <= C p^(-(2 sigma + 1))``.

    C counts the weight-two terms with a factor 3 of slack for higher weights.
    """
    r = len(sp.s)
    C = 3 * 2 * (r + comb(r, 2))
    a = 2 * sp.sigma_min + 1
    P = max(prime_limit, 2)
    return C * P ** (1 - a) / ((a - 1) * math.log(P))


def verify_convolution(k: int, s, coeff_limit: int, prime_limit: int) -> ConvolutionReport:
    """Compare the truncated Dirichlet series of f with its factored form.

    LHS sums f(n) / prod n_i^s_i over tuples with components <= coeff_limit.
    RHS is ``prod zeta(2 s_j) prod zeta(s_l + s_m) prod_{p <= prime_limit} E_p``.
    The budget adds a tail estimate for each truncation; the coefficient
    tail is extrapolated from the change between coeff_limit/2 and coeff_limit.
    """
    sp = _as_shift(s)
    if k not in (1, 2) or sp.k != k:
        raise InvalidArgument(f"need k in (1, 2) and 2k shifts, got k={k}, {len(sp.s)} shifts")
    if sp.sigma_min < 1.25:
        raise OutOfDomain(f"verify_convolution needs every shift >= 1.25, got {sp.s}")
    if coeff_limit < 4 or prime_limit < 2:
        raise InvalidArgument("coeff_limit must be >= 4 and prime_limit >= 2")
    sieve = build_spf_sieve(coeff_limit)
    lhs, _ = weighted_square_sum(coeff_limit, sp.s, sieve)
    lhs_half, _ = weighted_square_sum(coeff_limit // 2, sp.s, sieve)

    zetas = [zeta_real(2 * sj) for sj in sp.s]
    zetas += [zeta_real(a + b) for a, b in combinations(sp.s, 2)]
    rhs = math.prod(zetas) * euler_product_E(sp, prime_limit, None)

    coeff_tail = 2.0 * abs(lhs - lhs_half)
    prime_tail = abs(rhs) * math.expm1(_prime_tail(sp, prime_limit))
    return ConvolutionReport(
        k, sp.s, coeff_limit, prime_limit, lhs, rhs, abs(lhs - rhs), coeff_tail + prime_tail
    )


# --- Eulerian numbers and weight tails -----------------------------------

EULERIAN_MAX_N = 30


@lru_cache(maxsize=None)
def _eulerian_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _eulerian_row(n - 1)
    row = []
    for j in range(n + 1):
        a = (j + 1) * prev[j] if j < len(prev) else 0
        b = (n - j) * prev[j - 1] if j >= 1 else 0
        row.append(a + b)
    # A(n, n) = 0 for n >= 1; keep the row length n + 1 anyway
    return tuple(row)


def eulerian_number(n: int, j: int) -> int:
    if n < 0 or j < 0:
        raise InvalidArgument("n and j must be non-negative")
    if n > EULERIAN_MAX_N:
        raise InvalidArgument(f"n capped at {EULERIAN_MAX_N}, got {n}")
    if j > n:
        raise InvalidArgument(f"need j <= n, got j={j}, n={n}")
    return _eulerian_row(n)[j]


def eulerian_polynomial(n: int, x: float) -> float:
    return math.fsum(eulerian_number(n, j) * x**j for j in range(n + 1))


def power_sum_identity_check(n: int, x: float, L: int) -> float:
    """``|sum_{l=1}^{L} l^n x^l - x A_n(x) / (1 - x)^(n+1)|``."""
    if not 1 <= n <= 8:
        raise InvalidArgument(f"n must be in [1, 8], got {n}")
    if not 0 < x < 1:
        raise InvalidArgument(f"x must lie in (0, 1), got {x}")
    if x**L * L**n >= 1e-14:
        raise InvalidArgument(f"L={L} too small for x={x}, n={n}")
    series = math.fsum(l**n * x**l for l in range(1, L + 1))
    closed = x * eulerian_polynomial(n, x) / (1 - x) ** (n + 1)
    return abs(series - closed)


def tail_weight_bound_check(p: int, sigma: float, k: int) -> float:
    """``p^(4 sigma) (1 - 1/p) sum_{w >= 4 even} count(w, 2k) p^(-w sigma)``."""
    if sigma < 0.26:
        raise OutOfDomain(f"sigma must be >= 0.26, got {sigma}")
    if k < 1:
        raise InvalidArgument(f"k must be >= 1, got {k}")
    # factor p^(4 sigma) in before summing so nothing underflows
    r = 2 * k
    x = p ** (-sigma)
    terms = []
    w = 4
    while True:
        term = (1 - 1 / p) * weight_count(w, r) * x ** (w - 4)
        terms.append(term)
        if w > 8 * r and term < 1e-18 * math.fsum(terms):
            break
        w += 2
    return math.fsum(terms)


@dataclass(frozen=True)
class DecayProfile:
    s: tuple[float, ...]
    evaluated_at: tuple[float, ...]
    exponent: float
    primes: np.ndarray = field(repr=False)
    scaled: np.ndarray = field(repr=False)

    @property
    def max(self) -> float:
        return float(self.scaled.max())

    @property
    def min(self) -> float:
        return float(self.scaled.min())

    @property
    def median(self) -> float:
        return float(np.median(self.scaled))


def e_decay_profile(s, prime_limit: int, exponent: float | None = None) -> DecayProfile:
    """``|E_p - 1| * p^exponent`` for primes ``p <= prime_limit``.

    ``s`` is a shift for F (all components > 1/2); E is evaluated at the
    recentred point ``s - 1/2``, whose components must exceed 1/4.  The
    exponent defaults to ``4 * min(s - 1/2)``, the order of the weight-four
    terms that dominate there.
    """
    sp = _as_shift(s)
    if sp.sigma_min <= 0.5:
        raise OutOfDomain("shift components must exceed 1/2")
    centred = sp.shifted(-0.5)
    if centred.sigma_min <= 0.25:
        raise OutOfDomain("recentred components must exceed 1/4")
    if exponent is None:
        exponent = 4 * centred.sigma_min
    primes = np.array(primes_up_to(prime_limit), dtype=np.int64)
    scaled = np.array(
        [abs(local_factor_E(int(p), centred, None).E_local - 1) * float(p) ** exponent for p in primes]
    )
    return DecayProfile(sp.s, centred.s, exponent, primes, scaled)
