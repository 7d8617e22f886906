"""Law of the last zero before ``t`` of Brownian motion with drift ``mu``.

``T = sup{s < t : B(s) + mu s = 0}``.  Every quantity depends on the drift
only through ``mu**2``, so the code squares ``mu`` once and never looks at
its sign again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .quad import TIGHT_BUDGET, QuadratureBudget, integrate_adaptive, integrate_left_sqrt_singular
from .specfun import central_binomial_weight, kummer_half_one, scaled_partial_gamma

CDF_FORMS = ("integral-y", "integral-s", "angular")
PDF_FORMS = ("closed", "y-integral", "s-integral")


@dataclass(frozen=True)
class DriftClock:
    """Drift rate ``mu`` and time horizon ``t`` of a drifted Brownian motion."""

    mu: float
    t: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu!r}")
        if not (math.isfinite(self.t) and self.t > 0):
            raise DomainError(f"t must be positive and finite, got {self.t!r}")

    @property
    def mu2(self) -> float:
        return self.mu * self.mu


@dataclass(frozen=True)
class MixtureWeight:
    """Law of the random horizon W that turns the arcsine law into the drifted one.

    ``density`` is the absolutely continuous part on ``(0, t)`` evaluated at
    the requested point; ``atom_at_t`` is ``P(W = t)``.
    """

    density: float
    atom_at_t: float


def _check_open(clock: DriftClock, a: float) -> None:
    if not (0.0 < a < clock.t):
        raise DomainError(f"need 0 < a < t, got a={a!r}, t={clock.t!r}")


def arcsine_cdf(t: float, a: float) -> float:
    return 2.0 / math.pi * math.asin(math.sqrt(a / t))


def arcsine_pdf(t: float, a: float) -> float:
    return 1.0 / (math.pi * math.sqrt(a * (t - a)))


# --- distribution function -------------------------------------------------

def _cdf_integral_s(mu2: float, t: float, a: float, budget: QuadratureBudget) -> float:
    # 1 - (1/pi) int_0^{t-a} sqrt(a/s) exp(-mu2 (a+s)/2) / (a+s) ds
    sa = math.sqrt(a)

    def g(s):
        return sa * math.exp(-0.5 * mu2 * (a + s)) / (a + s)

    return 1.0 - integrate_left_sqrt_singular(g, 0.0, t - a, budget) / math.pi


def _cdf_integral_y(mu2: float, t: float, a: float, budget: QuadratureBudget) -> float:
    # 1 - (2/pi) int_0^{sqrt((t-a)/a)} exp(-mu2 a (1+y^2)/2) / (1+y^2) dy
    c = 0.5 * mu2 * a

    def f(y):
        q = 1.0 + y * y
        return math.exp(-c * q) / q

    return 1.0 - 2.0 / math.pi * integrate_adaptive(f, 0.0, math.sqrt((t - a) / a), budget)


def _cdf_angular(mu2: float, t: float, a: float, budget: QuadratureBudget) -> float:
    # 1 - (2/pi) exp(-mu2 a/2) int_0^{arccos sqrt(a/t)} exp(-mu2 a tan^2/2) dtheta
    c = 0.5 * mu2 * a

    def f(theta):
        tn = math.tan(theta)
        return math.exp(-c * tn * tn)

    upper = math.acos(math.sqrt(a / t))
    return 1.0 - 2.0 / math.pi * math.exp(-c) * integrate_adaptive(f, 0.0, upper, budget)


_CDF_IMPL = {
    "integral-y": _cdf_integral_y,
    "integral-s": _cdf_integral_s,
    "angular": _cdf_angular,
}


def no_zero_after(mu2: float, a: float, horizon: float,
                  budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """P(no zero of the drifted path in ``[a, horizon]``), ``horizon`` may be inf."""
    if horizon == a:
        return 1.0
    if math.isinf(horizon):
        return math.erf(math.sqrt(0.5 * mu2 * a))
    return _cdf_integral_y(mu2, horizon, a, budget)


def last_zero_cdf(clock: DriftClock, a: float, form: str = "integral-y",
                  budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """P(T < a) for the last zero T before ``clock.t``.

    ``form`` picks one of three equivalent one-dimensional integrals; the
    default has a bounded analytic integrand.  ``a == t`` returns 1.
    """
    if form not in _CDF_IMPL:
        raise ValueError(f"unknown form {form!r}; choose from {CDF_FORMS}")
    if not (0.0 < a <= clock.t):
        raise DomainError(f"need 0 < a <= t, got a={a!r}, t={clock.t!r}")
    if a == clock.t:
        return 1.0
    return _CDF_IMPL[form](clock.mu2, clock.t, a, budget)


# --- density ---------------------------------------------------------------

def _pdf_closed(mu2: float, t: float, a: float) -> float:
    # arcsine part damped by exp(-mu2 t/2), plus the no-return density times
    # erf(|mu| sqrt((t-a)/2)), which is the y-integral done in closed form
    head = math.exp(-0.5 * mu2 * t) / (math.pi * math.sqrt(a * (t - a)))
    if mu2 == 0.0:
        return head
    amu = math.sqrt(mu2)
    tail = amu * math.exp(-0.5 * mu2 * a) / math.sqrt(2.0 * math.pi * a)
    return head + tail * math.erf(amu * math.sqrt(0.5 * (t - a)))


def _pdf_y_integral(mu2: float, t: float, a: float, budget: QuadratureBudget) -> float:
    head = math.exp(-0.5 * mu2 * t) / (math.pi * math.sqrt(a * (t - a)))
    if mu2 == 0.0:
        return head
    c = 0.5 * mu2 * a

    def f(y):
        return math.exp(-c * (1.0 + y * y))

    return head + mu2 / math.pi * integrate_adaptive(f, 0.0, math.sqrt((t - a) / a), budget)


def _pdf_s_integral(mu2: float, t: float, a: float, budget: QuadratureBudget) -> float:
    head = math.exp(-0.5 * mu2 * t) / (math.pi * math.sqrt(a * (t - a)))
    if mu2 == 0.0:
        return head
    sa = math.sqrt(a)

    def g(y):
        return math.exp(-0.5 * mu2 * y) / sa

    return head + mu2 / (2.0 * math.pi) * integrate_left_sqrt_singular(g, a, t, budget)


def last_zero_pdf(clock: DriftClock, a: float, form: str = "closed",
                  budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """Density of the last zero at ``a`` in ``(0, t)``.

    ``"y-integral"`` and ``"s-integral"`` evaluate the two quadrature forms;
    ``"closed"`` (default) uses the erf closed form of the y-integral.
    """
    _check_open(clock, a)
    if form == "closed":
        return _pdf_closed(clock.mu2, clock.t, a)
    if form == "y-integral":
        return _pdf_y_integral(clock.mu2, clock.t, a, budget)
    if form == "s-integral":
        return _pdf_s_integral(clock.mu2, clock.t, a, budget)
    raise ValueError(f"unknown form {form!r}; choose from {PDF_FORMS}")


# --- moments and mgf -------------------------------------------------------

def last_zero_moment(clock: DriftClock, m: int) -> float:
    """E[T**m] = C(2m,m)/4**m * m * int_0^t a**(m-1) exp(-mu**2 a/2) da.

    The integral is ``t**m`` times :func:`scaled_partial_gamma`, which has
    the ``mu -> 0`` limit built in.
    """
    if m < 1 or int(m) != m:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    t = clock.t
    return central_binomial_weight(m) * t ** m * scaled_partial_gamma(m, 0.5 * clock.mu2 * t)


def last_zero_mean(clock: DriftClock) -> float:
    """(1 - exp(-mu**2 t/2)) / mu**2, with the t/2 limit at mu = 0."""
    x = 0.5 * clock.mu2 * clock.t
    if x == 0.0:
        return 0.5 * clock.t
    return -math.expm1(-x) / clock.mu2


def last_zero_mgf(clock: DriftClock, gamma: float,
                  budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """E[exp(gamma T)] through the Kummer function 1F1(. ; 1/2, 1)."""
    mu2, t = clock.mu2, clock.t
    head = math.exp(-0.5 * mu2 * t) * kummer_half_one(gamma * t)
    if mu2 == 0.0:
        return head

    def f(a):
        return math.exp(-0.5 * mu2 * a) * kummer_half_one(gamma * a)

    return head + 0.5 * mu2 * integrate_adaptive(f, 0.0, t, budget)


# --- limits and approximations ---------------------------------------------

def last_zero_cdf_infinite_horizon(mu: float, a: float) -> float:
    """lim_{t -> inf} P(T < a) = erf(|mu| sqrt(a/2)).

    This is the Gamma(1/2, rate mu**2/2) distribution function; its mean
    1/mu**2 is the large-t limit of :func:`last_zero_mean`.
    """
    if mu == 0.0 or not math.isfinite(mu):
        raise DomainError("the infinite-horizon law needs a finite nonzero drift")
    if not a > 0:
        raise DomainError(f"need a > 0, got {a!r}")
    if math.isinf(a):
        return 1.0
    return math.erf(abs(mu) * math.sqrt(0.5 * a))


def last_zero_small_mu(clock: DriftClock, a: float, *, printed: bool = False) -> tuple[float, float]:
    """First-order (in mu**2) approximations ``(pdf, cdf)`` of the drifted law.

    The cdf term is the antiderivative of the pdf correction,
    ``(mu**2 / pi) sqrt(a (t - a))``.  ``printed=True`` uses the coefficient
    ``mu**2 / 2`` instead, which does not integrate the pdf approximation.
    """
    _check_open(clock, a)
    t, mu2 = clock.t, clock.mu2
    pdf = arcsine_pdf(t, a) * (1.0 + 0.5 * mu2 * (t - 2.0 * a))
    coef = 0.5 * mu2 if printed else mu2 / math.pi
    cdf = arcsine_cdf(t, a) + coef * math.sqrt(a * (t - a))
    return pdf, cdf


def mixture_weight(clock: DriftClock, w: float) -> MixtureWeight:
    if not (0.0 < w <= clock.t):
        raise DomainError(f"need 0 < w <= t, got w={w!r}, t={clock.t!r}")
    mu2 = clock.mu2
    return MixtureWeight(density=0.5 * mu2 * math.exp(-0.5 * mu2 * w),
                         atom_at_t=math.exp(-0.5 * mu2 * clock.t))
