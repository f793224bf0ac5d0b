"""Polynomial fits in log Y and the degree bookkeeping for the main term."""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import Polynomial

from .errors import IllConditioned, InvalidArgument


@dataclass(frozen=True)
class ExponentConstants:
    k: int
    q: int
    w: int
    rank: int
    expected_degree: int

    def as_dict(self) -> dict:
        return {"q": self.q, "w": self.w, "rank": self.rank, "degree": self.expected_degree}


def exponent_constants(k: int) -> ExponentConstants:
    """Linear forms ``2 s_j`` and ``s_l + s_m`` over 2k variables: q of them, rank 2k."""
    if k < 1:
        raise InvalidArgument(f"k must be >= 1, got {k}")
    r = 2 * k
    q = r + comb(r, 2)
    w = 0  # every abscissa of convergence is 1/2, none is 0
    rank = r
    return ExponentConstants(k, q, w, rank, q + w - rank)


@dataclass(frozen=True)
class FitReport:
    degree: int
    coefficients: tuple[float, ...]
    r_squared: float
    max_relative_residual: float
    sample_count: int

    def __call__(self, log_y):
        return np.polynomial.polynomial.polyval(log_y, self.coefficients)

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": list(self.coefficients),
            "r_squared": self.r_squared,
            "max_relative_residual": self.max_relative_residual,
            "sample_count": self.sample_count,
        }


def polyfit_log(points, degree: int) -> FitReport:
    """Least-squares fit of ``value ~ sum_i c_i (log Y)^i``.

    The fit runs on log Y mapped to [-1, 1] and is converted back, which
    keeps the design well conditioned up to moderate degree.
    """
    if degree < 0:
        raise InvalidArgument(f"degree must be >= 0, got {degree}")
    pts = sorted((float(y), float(v)) for y, v in points)
    ys = np.array([p[0] for p in pts])
    vals = np.array([p[1] for p in pts])
    if len(pts) < degree + 2:
        raise InvalidArgument(f"need at least {degree + 2} points for degree {degree}")
    if np.any(ys < 2) or len(np.unique(ys)) != len(ys):
        raise InvalidArgument("Y values must be distinct and >= 2")
    x = np.log(ys)
    lo, hi = x.min(), x.max()
    t = (2 * x - (lo + hi)) / (hi - lo) if hi > lo else np.zeros_like(x)
    design = np.vander(t, degree + 1, increasing=True)
    if np.linalg.matrix_rank(design) < degree + 1:
        raise IllConditioned(f"design matrix is rank deficient for degree {degree}")
    poly = Polynomial.fit(x, vals, degree)
    coeffs = poly.convert().coef
    coeffs = np.concatenate([coeffs, np.zeros(degree + 1 - len(coeffs))])
    fitted = poly(x)
    resid = vals - fitted
    ss_tot = float(np.sum((vals - vals.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(vals != 0, np.abs(resid / vals), np.abs(resid))
    return FitReport(degree, tuple(float(c) for c in coeffs), r2, float(rel.max()), len(pts))


@dataclass(frozen=True)
class DegreeReport:
    k: int
    expected_degree: int
    fit: FitReport
    higher_fit: FitReport
    top_marginal: float
    passed: bool

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "expected_degree": self.expected_degree,
            "fit": self.fit.as_dict(),
            "higher_fit": self.higher_fit.as_dict(),
            "top_marginal": self.top_marginal,
            "verdict": self.verdict,
        }


R2_MIN = 0.999
MARGINAL_MAX = 0.01
MIN_SAMPLES = 10


def degree_report(k: int, samples) -> DegreeReport:
    """Check that ``T_k(Y) / Y^k`` behaves like a polynomial of degree ``2k^2 - k`` in log Y.

    Passes when the degree-d fit has r^2 >= 0.999 with a positive leading
    coefficient, and the top term of a degree-(d+1) fit contributes at most
    1% of the fitted value at the largest Y.
    """
    samples = sorted((float(y), float(v)) for y, v in samples)
    if len(samples) < MIN_SAMPLES:
        raise InvalidArgument(f"need at least {MIN_SAMPLES} samples, got {len(samples)}")
    d = exponent_constants(k).expected_degree
    pts = [(y, v / y**k) for y, v in samples]
    fit = polyfit_log(pts, d)
    higher = polyfit_log(pts, d + 1)
    x_max = math.log(pts[-1][0])
    top = abs(higher.coefficients[-1] * x_max ** (d + 1))
    denom = abs(float(higher(x_max)))
    marginal = top / denom if denom > 0 else math.inf
    passed = fit.r_squared >= R2_MIN and fit.coefficients[-1] > 0 and marginal <= MARGINAL_MAX
    return DegreeReport(k, d, fit, higher, marginal, passed)
