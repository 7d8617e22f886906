"""Scalar special functions used by the closed-form laws."""

from __future__ import annotations

import math

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)

# e**x overflows just above 709.78
KUMMER_OVERFLOW_GUARD = 700.0


def erf(x: float) -> float:
    return math.erf(x)


def erfc(x: float) -> float:
    return math.erfc(x)


def gauss_cdf(x: float) -> float:
    """Standard normal CDF, computed through erfc so both tails keep precision."""
    return 0.5 * math.erfc(-x / SQRT2)


def gauss_sf(x: float) -> float:
    return 0.5 * math.erfc(x / SQRT2)


def gauss_pdf(x: float, mean: float = 0.0, var: float = 1.0) -> float:
    z = x - mean
    return math.exp(-0.5 * z * z / var) / math.sqrt(2.0 * math.pi * var)


def _kummer_series(x: float) -> float:
    # x >= 0: every term is positive, no cancellation
    total = 1.0
    term = 1.0
    m = 0
    while True:
        term *= x * (m + 0.5) / ((m + 1.0) * (m + 1.0))
        m += 1
        total += term
        if m > x and term <= 1e-17 * total:
            return total
        if m > 100_000:  # pragma: no cover - unreachable below the guard
            raise ArithmeticError("kummer series did not terminate")


def kummer_half_one(x: float) -> float:
    """Confluent hypergeometric 1F1(1/2; 1; x).

    Positive arguments are summed directly.  Negative arguments go through
    Kummer's transformation 1F1(a; b; x) = e**x 1F1(b - a; b; -x), which
    keeps every summed term positive.
    """
    if not math.isfinite(x):
        raise ValueError(f"kummer_half_one needs a finite argument, got {x!r}")
    if abs(x) > KUMMER_OVERFLOW_GUARD:
        raise OverflowError(f"1F1(1/2;1;x) overflows for |x| > {KUMMER_OVERFLOW_GUARD}: x={x}")
    if x >= 0.0:
        return _kummer_series(x)
    return math.exp(x) * _kummer_series(-x)


def central_binomial_weight(m: int) -> float:
    """C(2m, m) / 4**m as a running product of (2j - 1) / (2j)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    w = 1.0
    for j in range(1, m + 1):
        w *= (2 * j - 1) / (2 * j)
    return w


def scaled_partial_gamma(m: int, x: float) -> float:
    """m * integral_0^1 y**(m-1) exp(-x y) dy, i.e. m * gamma_lower(m, x) / x**m.

    Equals 1 at x = 0 and decreases in x.  Small x uses the power series so
    the removable singularity at x = 0 is handled without division.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 1.0
    if x < 1.0:
        # sum_k (-x)**k / k! * m / (m + k)
        total = 0.0
        term = 1.0
        k = 0
        while True:
            contrib = term * m / (m + k)
            total += contrib
            if abs(contrib) < 1e-18 * abs(total):
                return total
            k += 1
            term *= -x / k
    from scipy.special import gammainc, gammaln

    # gammainc is regularized: gamma_lower(m, x) = gammainc * Gamma(m)
    log_scale = gammaln(m + 1.0) - m * math.log(x)
    return float(gammainc(m, x)) * math.exp(log_scale)
