"""Laws built by composing Brownian clocks.

* ``iterated_bm_pdf``: density of ``B1^{mu1}(|B2^{mu2}(t)|)``.
* ``iter_last_zero_cdf``: last zero of ``B1^mu`` before the random horizon
  ``max_{z <= t} |B2(z)|``.
* ``nested_last_zero_*``: last zero of ``B1^{mu1}`` before the last zero of
  ``B2^{mu2}`` before ``t``.
* ``nfold_*``: the driftless recursion where each level's last zero is the
  next level's horizon.  ``n`` counts arcsine kernels, so ``n = 1`` is the
  plain arcsine law and ``n = 2`` the driftless nested law.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .errors import DepthError, DomainError, NonConvergenceError
from .lastzero import DriftClock, last_zero_cdf
from .quad import (TIGHT_BUDGET, QuadratureBudget, integrate_adaptive,
                   integrate_left_sqrt_singular)
from .reflmax import DEFAULT_SERIES, SeriesBudget, max_abs_cdf, max_onesided_cdf
from .specfun import central_binomial_weight

MAX_ANALYTIC_DEPTH = 3
HORIZON_KINDS = ("abs-max", "one-sided-max")


@dataclass(frozen=True)
class NestedSpec:
    """Depth ``n`` and one drift per level, innermost clock last.

    ``drifts[0]`` belongs to the motion whose last zero is reported and
    ``drifts[-1]`` to the motion observed on the fixed horizon ``t``.
    """

    n: int
    drifts: tuple[float, ...] = field(default=())
    t: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"depth must be a positive integer, got {self.n!r}")
        drifts = tuple(float(m) for m in self.drifts) or (0.0,) * int(self.n)
        if len(drifts) != self.n:
            raise DomainError(f"need {self.n} drifts, got {len(drifts)}")
        if not (math.isfinite(self.t) and self.t > 0):
            raise DomainError(f"t must be positive, got {self.t!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "drifts", drifts)

    @property
    def driftless(self) -> bool:
        return all(m == 0.0 for m in self.drifts)


def _deadline_guard(deadline: float | None, what: str):
    if deadline is None:
        return lambda: None

    def check():
        if time.monotonic() > deadline:
            raise NonConvergenceError(f"{what}: deadline passed")
    return check


# --- iterated Brownian motion -----------------------------------------------

def iterated_bm_pdf(mu1: float, mu2: float, t: float, x: float,
                    budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """Density at ``x`` of ``B1^{mu1}(|B2^{mu2}(t)|)``.

    The outer Gaussian has a ``1/sqrt(s)`` factor at ``s = 0``, removed by
    ``s = u**2``.
    """
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"t must be positive, got {t!r}")
    c = 1.0 / (2.0 * math.pi * math.sqrt(t))

    def g(s):
        # sqrt(s) times the integrand
        if s == 0.0:
            outer = 1.0 if x == 0.0 else 0.0
        else:
            z = x - mu1 * s
            outer = math.exp(-0.5 * z * z / s)
        inner = (math.exp(-0.5 * (s - mu2 * t) ** 2 / t)
                 + math.exp(-0.5 * (s + mu2 * t) ** 2 / t))
        return c * outer * inner

    return integrate_left_sqrt_singular(g, 0.0, math.inf, budget)


# --- last zero before the inner maximal span --------------------------------

def _outer_weight(mu2_outer: float, a: float, w: float) -> float:
    # -d/dw P(last zero before w is < a), times w sqrt(w - a)
    return math.sqrt(a) / math.pi * math.exp(-0.5 * mu2_outer * w) / w


def _iter_cdf(mu: float, t: float, a: float, inner_cdf, spread: float,
              budget: QuadratureBudget) -> float:
    if not (math.isfinite(a) and a > 0):
        if a == math.inf:
            return 1.0
        raise DomainError(f"need a > 0, got {a!r}")
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"t must be positive, got {t!r}")
    mu2 = mu * mu
    head = math.erf(math.sqrt(0.5 * mu2 * a))
    # beyond w_star the inner law has saturated: P(inner max >= w_star) < 1e-18
    w_star = max(a + t, 9.0 * math.sqrt(t) + spread)

    def g(w):
        return _outer_weight(mu2, a, w) * inner_cdf(w)

    body = integrate_left_sqrt_singular(g, a, w_star, budget)
    # closed form of the remaining weight over (w_star, inf) with inner cdf 1
    tail = last_zero_cdf(DriftClock(mu, w_star), a) - head
    return min(1.0, max(0.0, head + body + tail))


def iter_last_zero_cdf(mu: float, t: float, a: float,
                       budget: QuadratureBudget = TIGHT_BUDGET,
                       series: SeriesBudget = DEFAULT_SERIES) -> float:
    """P(last zero of B1^mu before max_{z<=t} |B2(z)| is < a), driftless B2.

    ``erf(|mu| sqrt(a/2)) + sqrt(a)/pi int_a^inf exp(-mu**2 w/2)
    P(max|B2| < w) / (w sqrt(w - a)) dw``.
    """
    clock = DriftClock(0.0, t)
    return _iter_cdf(mu, t, a, lambda w: max_abs_cdf(clock, w, series), 0.0, budget)


def iter_last_zero_cdf_drifted_inner(mu1: float, mu2: float, t: float, a: float,
                                     horizon_kind: str = "abs-max",
                                     budget: QuadratureBudget = TIGHT_BUDGET,
                                     series: SeriesBudget = DEFAULT_SERIES) -> float:
    """As :func:`iter_last_zero_cdf` with a drifted inner motion ``B2^{mu2}``.

    ``horizon_kind="abs-max"`` uses ``max |B2^{mu2}|`` as the horizon;
    ``"one-sided-max"`` uses ``max B2^{mu2}`` (started at 0).
    """
    clock = DriftClock(mu2, t)
    if horizon_kind == "abs-max":
        def inner(w):
            return max_abs_cdf(clock, w, series)
    elif horizon_kind == "one-sided-max":
        def inner(w):
            return max_onesided_cdf(clock, w)
    else:
        raise ValueError(f"unknown horizon_kind {horizon_kind!r}; choose from {HORIZON_KINDS}")
    return _iter_cdf(mu1, t, a, inner, abs(mu2) * t, budget)


# --- nested last zero ---------------------------------------------------------

def _check_nested(t: float, a: float) -> None:
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"t must be positive, got {t!r}")
    if not (0.0 < a < t):
        raise DomainError(f"need 0 < a < t, got a={a!r}, t={t!r}")


def nested_last_zero_cdf(mu1: float, mu2: float, t: float, a: float,
                         budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """P(last zero of B1^{mu1} before the last zero of B2^{mu2} before t is < a).

    Integrating by parts over the inner law gives
    ``F1(t; a) + sqrt(a)/pi int_a^t exp(-mu1**2 w/2) F2(t; w) / (w sqrt(w - a)) dw``,
    with ``F1(w; a) = P(T^{mu1}_{0,w} < a)`` and ``F2(t; w) = P(T^{mu2}_{0,t} < w)``.
    """
    _check_nested(t, a)
    outer = DriftClock(mu1, t)
    inner = DriftClock(mu2, t)
    mu1sq = outer.mu2

    def g(w):
        f2 = 1.0 if w >= t else last_zero_cdf(inner, w)
        return _outer_weight(mu1sq, a, w) * f2

    value = last_zero_cdf(outer, a) + integrate_left_sqrt_singular(g, a, t, budget)
    return min(1.0, max(0.0, value))


def _scaled_lz_density(mu2: float, x: float, d: float, sqrt_d: float) -> float:
    # sqrt(d) times the last-zero density at x for the horizon x + d; the
    # offset d is passed separately so it keeps full precision when tiny
    head = math.exp(-0.5 * mu2 * (x + d)) / (math.pi * math.sqrt(x))
    if mu2 == 0.0:
        return head
    amu = math.sqrt(mu2)
    tail = amu * math.exp(-0.5 * mu2 * x) / math.sqrt(2.0 * math.pi * x)
    return head + sqrt_d * tail * math.erf(amu * math.sqrt(0.5 * d))


def _theta_integral(h, budget: QuadratureBudget) -> float:
    # int_lo^hi f(w) dw / sqrt((w - lo)(hi - w)) = 2 int_0^{pi/2} f dtheta
    return 2.0 * integrate_adaptive(h, 0.0, 0.5 * math.pi, budget)


def nested_last_zero_pdf(mu1: float, mu2: float, t: float, a: float,
                         budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """int_a^t p^{mu1}_w(a) p^{mu2}_t(w) dw, both factors last-zero densities.

    Both factors carry an inverse square root, at ``w = a`` and ``w = t``;
    with ``w = a + (t - a) sin(theta)**2`` they cancel against the Jacobian.
    """
    _check_nested(t, a)
    m1, m2 = mu1 * mu1, mu2 * mu2
    length = t - a

    def h(theta):
        s, c = math.sin(theta), math.cos(theta)
        d1 = length * s * s
        d2 = length * c * c
        w = a + d1 if d1 <= d2 else t - d2
        root = math.sqrt(length)
        return _scaled_lz_density(m1, a, d1, root * s) * _scaled_lz_density(m2, w, d2, root * c)

    return _theta_integral(h, budget)


# --- n-fold driftless recursion ----------------------------------------------

def _nfold_pdf(n: int, x: float, d: float, budget: QuadratureBudget, check) -> float:
    # density at x when the outermost horizon is x + d
    if n == 1:
        return 1.0 / (math.pi * math.sqrt(x * d))
    check()

    def h(theta):
        s, c = math.sin(theta), math.cos(theta)
        d1 = d * s * s
        d2 = d * c * c
        w = x + d1 if d1 <= d2 else x + d - d2
        return math.sqrt(d2) * _nfold_pdf(n - 1, w, d2, budget, check)

    return _theta_integral(h, budget) / (math.pi * math.sqrt(x))


def nfold_last_zero_pdf(n: int, t: float, a: float,
                        budget: QuadratureBudget = TIGHT_BUDGET, *,
                        deadline: float | None = None) -> float:
    """Density of the n-fold driftless last zero at ``a``.

    ``p_1(a) = 1/(pi sqrt(a (t - a)))`` and ``p_n(a) = int_a^t k(a, w)
    p_{n-1}(w) dw`` with ``k(a, w) = 1/(pi sqrt(a (w - a)))``.  Depths above
    three raise :class:`DepthError`; use :func:`zerocross.mcoracle.sample_nested`.
    ``deadline`` is a ``time.monotonic()`` value after which evaluation stops.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if n > MAX_ANALYTIC_DEPTH:
        raise DepthError(f"analytic n-fold density only for n <= {MAX_ANALYTIC_DEPTH}, got {n}")
    _check_nested(t, a)
    check = _deadline_guard(deadline, "nfold_last_zero_pdf")
    return _nfold_pdf(int(n), a, t - a, budget, check)


def nfold_moment(n: int, m: int, t: float) -> float:
    """E[T_n**m] = (C(2m, m) / 4**m)**n * t**m."""
    if int(n) != n or n < 1 or int(m) != m or m < 1:
        raise DomainError(f"n and m must be positive integers, got n={n!r}, m={m!r}")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    return central_binomial_weight(int(m)) ** int(n) * t ** m


def nfold_mgf(n: int, t: float, alpha: float, *, max_terms: int = 500,
              rel_tol: float = 1e-14) -> float:
    """E[exp(alpha T_n)] = sum_m (alpha t)**m (C(2m, m)/4**m)**n / m!.

    Terms follow the ratio ``alpha t ((2m+1)/(2m+2))**n / (m+1)``; the sum
    stops when a term drops below ``rel_tol`` times the partial sum.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    x = alpha * t
    total = 1.0
    term = 1.0
    for m in range(max_terms):
        term *= x * ((2 * m + 1) / (2 * m + 2)) ** n / (m + 1)
        total += term
        if abs(term) <= rel_tol * abs(total) and m + 1 > abs(x):
            return total
        if not math.isfinite(total):
            break
    raise NonConvergenceError(
        f"n-fold mgf series not converged in {max_terms} terms (alpha t = {x})", estimate=total)
