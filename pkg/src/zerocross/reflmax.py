"""Two-barrier laws of drifted Brownian motion by the method of images.

The drifted density of ``B^mu(t)`` on paths confined to ``(alpha, beta)`` is
the driftless image series tilted by the Girsanov factor
``exp(mu y - mu**2 t / 2)``.  The tilt is uniform in ``y``, which is what
makes the density vanish at both barriers and the bridge law drift free.

``printed=True`` switches to the per-image weights ``exp(mu (y - 2k D))``
(``D = beta - alpha``) for comparison; that variant neither vanishes at the
barriers nor yields a drift-free bridge law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import log_ndtr

from .errors import DomainError, SeriesBudgetError
from .lastzero import DriftClock
from .quad import TIGHT_BUDGET, QuadratureBudget, integrate_adaptive
from .specfun import gauss_cdf

# below this value of (width**2 / t) the image sums converge slowly and the
# eigenfunction (sine) expansion is used instead
_FOURIER_SWITCH = 1.0


@dataclass(frozen=True)
class BarrierBox:
    """Absorbing barriers ``alpha < 0 < beta`` around a path started at 0."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha < 0.0 < self.beta):
            raise DomainError(f"need alpha < 0 < beta, got ({self.alpha!r}, {self.beta!r})")

    @property
    def width(self) -> float:
        return self.beta - self.alpha


@dataclass(frozen=True)
class SeriesBudget:
    max_terms: int = 200
    tail_tol: float = 1e-12

    def __post_init__(self):
        if self.max_terms < 1 or not self.tail_tol > 0:
            raise ValueError("max_terms must be >= 1 and tail_tol > 0")


DEFAULT_SERIES = SeriesBudget()


def _phi(u: float, t: float) -> float:
    return math.exp(-0.5 * u * u / t) / math.sqrt(2.0 * math.pi * t)


def _images_driftless(t: float, alpha: float, beta: float, y: float,
                      budget: SeriesBudget) -> float:
    width = beta - alpha
    scale = 1.0 / math.sqrt(2.0 * math.pi * t)
    total = _phi(y, t) - _phi(y - 2.0 * alpha, t)
    for k in range(1, budget.max_terms + 1):
        s = 2.0 * k * width
        terms = (_phi(y - s, t), _phi(y - s - 2.0 * alpha, t),
                 _phi(y + s, t), _phi(y + s - 2.0 * alpha, t))
        total += terms[0] - terms[1] + terms[2] - terms[3]
        if max(terms) <= budget.tail_tol * max(abs(total), scale):
            return total
    raise SeriesBudgetError(
        f"image series not converged after {budget.max_terms} terms "
        f"(t={t}, alpha={alpha}, beta={beta})", estimate=total)


def _images_printed(mu: float, t: float, alpha: float, beta: float, y: float,
                    budget: SeriesBudget) -> float:
    width = beta - alpha
    scale = 1.0 / math.sqrt(2.0 * math.pi * t)

    def pair(k):
        s = 2.0 * k * width
        w = math.exp(-0.5 * mu * mu * t + mu * (y - s))
        return w * _phi(y - s, t), w * _phi(y - s - 2.0 * alpha, t)

    p, q = pair(0)
    total = p - q
    for k in range(1, budget.max_terms + 1):
        p1, q1 = pair(k)
        p2, q2 = pair(-k)
        total += p1 - q1 + p2 - q2
        if max(p1, q1, p2, q2) <= budget.tail_tol * max(abs(total), scale):
            return total
    raise SeriesBudgetError(
        f"printed image series not converged after {budget.max_terms} terms", estimate=total)


def _sine_driftless(t: float, alpha: float, beta: float, y: float,
                    budget: SeriesBudget) -> float:
    # Dirichlet heat kernel on (alpha, beta) from 0 to y
    width = beta - alpha
    total = 0.0
    for n in range(1, budget.max_terms + 1):
        omega = n * math.pi / width
        decay = math.exp(-0.5 * omega * omega * t)
        term = decay * math.sin(-omega * alpha) * math.sin(omega * (y - alpha))
        total += term
        if decay <= budget.tail_tol * max(abs(total), 1e-300) and n > 1:
            return 2.0 / width * total
        if decay == 0.0:
            return 2.0 / width * total
    raise SeriesBudgetError(f"sine series not converged after {budget.max_terms} terms",
                            estimate=2.0 / width * total)


def driftless_confined_density(t: float, box: BarrierBox, y: float,
                               budget: SeriesBudget = DEFAULT_SERIES) -> float:
    """Density of a driftless path at ``y`` that stayed inside the box up to ``t``."""
    if not (box.alpha < y < box.beta):
        raise DomainError(f"need alpha < y < beta, got y={y!r}")
    if box.width ** 2 / t < _FOURIER_SWITCH:
        return _sine_driftless(t, box.alpha, box.beta, y, budget)
    return _images_driftless(t, box.alpha, box.beta, y, budget)


def two_barrier_density(clock: DriftClock, box: BarrierBox, y: float,
                        budget: SeriesBudget = DEFAULT_SERIES, *, printed: bool = False) -> float:
    """P(B^mu(t) in dy, alpha < min B^mu < max B^mu < beta) / dy."""
    if not (box.alpha < y < box.beta):
        raise DomainError(f"need alpha < y < beta, got y={y!r}")
    mu, t = clock.mu, clock.t
    if printed:
        return _images_printed(mu, t, box.alpha, box.beta, y, budget)
    q0 = driftless_confined_density(t, box, y, budget)
    return math.exp(mu * y - 0.5 * mu * mu * t) * q0


def confinement_probability(clock: DriftClock, box: BarrierBox,
                            budget: SeriesBudget = DEFAULT_SERIES,
                            quad_budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """P(alpha < min < max < beta) by integrating :func:`two_barrier_density`."""
    return integrate_adaptive(lambda y: two_barrier_density(clock, box, y, budget),
                              box.alpha, box.beta, quad_budget)


# --- max |B^mu| --------------------------------------------------------------

def _log_gauss_interval(u_hi: float, u_lo: float) -> float:
    """log(Phi(u_hi) - Phi(u_lo)) for u_lo < u_hi, accurate in both tails."""
    if u_hi <= 0.0:
        la, lb = float(log_ndtr(u_hi)), float(log_ndtr(u_lo))
    elif u_lo >= 0.0:
        la, lb = float(log_ndtr(-u_lo)), float(log_ndtr(-u_hi))
    else:
        return math.log(1.0 - gauss_cdf(u_lo) - gauss_cdf(-u_hi))
    if lb == -math.inf:
        return la
    return la + math.log1p(-math.exp(lb - la))


def _max_abs_images(mu: float, t: float, beta: float, budget: SeriesBudget,
                    printed: bool) -> float:
    st = math.sqrt(t)

    def term(r):
        u_hi = (beta - 2.0 * beta * r - mu * t) / st
        u_lo = (-beta - 2.0 * beta * r - mu * t) / st
        if printed:
            log_w = -2.0 * mu * beta if r % 2 else 0.0
        else:
            log_w = 2.0 * mu * beta * r
        return (-1.0) ** (r % 2) * math.exp(log_w + _log_gauss_interval(u_hi, u_lo))

    total = term(0)
    for r in range(1, budget.max_terms + 1):
        a, b = term(r), term(-r)
        total += a + b
        if max(abs(a), abs(b)) <= budget.tail_tol * max(abs(total), 1e-300):
            return total
    raise SeriesBudgetError(f"max|B| image series not converged after {budget.max_terms} terms",
                            estimate=total)


def _max_abs_sine(mu: float, t: float, beta: float, budget: SeriesBudget) -> float:
    # exp(-mu^2 t/2) 2 cosh(mu beta) / beta * sum_k (-1)^k w e^{-w^2 t/2} / (mu^2 + w^2),
    # w = (2k+1) pi / (2 beta)
    amb = abs(mu) * beta
    log_pref = -0.5 * mu * mu * t + amb + math.log1p(math.exp(-2.0 * amb)) - math.log(beta)
    total = 0.0
    for k in range(budget.max_terms):
        w = (2 * k + 1) * math.pi / (2.0 * beta)
        log_mag = log_pref - 0.5 * w * w * t + math.log(w / (mu * mu + w * w))
        term = math.exp(log_mag)
        total += term if k % 2 == 0 else -term
        if term <= budget.tail_tol * max(abs(total), 1e-300):
            return total
    raise SeriesBudgetError(f"max|B| sine series not converged after {budget.max_terms} terms",
                            estimate=total)


def max_abs_cdf(clock: DriftClock, beta: float, budget: SeriesBudget = DEFAULT_SERIES, *,
                printed: bool = False) -> float:
    """P(max_{s <= t} |B^mu(s)| < beta).

    Sum over images r of ``(-1)**r exp(2 mu beta r)`` times the Gaussian mass
    of ``(-beta, beta)`` shifted by ``2 beta r + mu t``; for narrow strips the
    equivalent sine expansion is summed instead.  ``printed=True`` uses the
    alternative weights ``(-1)**r exp(-2 mu beta [r odd])`` for comparison.
    """
    if not beta > 0:
        raise DomainError(f"need beta > 0, got {beta!r}")
    if math.isinf(beta):
        return 1.0
    mu, t = clock.mu, clock.t
    if printed:
        value = _max_abs_images(mu, t, beta, budget, printed=True)
    elif (2.0 * beta) ** 2 / t < _FOURIER_SWITCH:
        value = _max_abs_sine(mu, t, beta, budget)
    else:
        value = _max_abs_images(mu, t, beta, budget, printed=False)
    return value if printed else min(1.0, max(0.0, value))


def max_abs_sf(clock: DriftClock, beta: float, budget: SeriesBudget = DEFAULT_SERIES) -> float:
    """P(max |B^mu| >= beta) = 1 - :func:`max_abs_cdf`."""
    return 1.0 - max_abs_cdf(clock, beta, budget)


# --- one-sided maximum -------------------------------------------------------

def max_onesided_cdf(clock: DriftClock, beta: float, y0: float = 0.0, *,
                     route: str = "closed",
                     quad_budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """P(max_{s <= t} B^mu(s) < beta | B^mu(0) = y0) = P(first passage to beta > t).

    ``route="closed"`` is the reflection formula; ``route="passage"``
    integrates the first-passage density instead.
    """
    if not y0 < beta:
        raise DomainError(f"need y0 < beta, got y0={y0!r}, beta={beta!r}")
    if math.isinf(beta):
        return 1.0
    mu, t = clock.mu, clock.t
    d = beta - y0
    st = math.sqrt(t)
    if route == "closed":
        first = gauss_cdf((d - mu * t) / st)
        second = math.exp(2.0 * mu * d + float(log_ndtr((-d - mu * t) / st)))
        return first - second
    if route == "passage":
        def density(s):
            if s <= 0.0:
                return 0.0
            z = d - mu * s
            return d * math.exp(-0.5 * z * z / s) / math.sqrt(2.0 * math.pi * s ** 3)
        return 1.0 - integrate_adaptive(density, 0.0, t, quad_budget)
    raise ValueError(f"unknown route {route!r}")


# --- bridge ------------------------------------------------------------------

def kolmogorov_series(x: float, budget: SeriesBudget = DEFAULT_SERIES) -> float:
    """sum_r (-1)**r exp(-2 r**2 x**2); the theta-transformed sum for small x."""
    if not x > 0:
        raise DomainError(f"need x > 0, got {x!r}")
    if x < 1.0:
        # sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
        total = 0.0
        for k in range(1, budget.max_terms + 1):
            term = math.exp(-((2 * k - 1) * math.pi) ** 2 / (8.0 * x * x))
            total += term
            if term <= budget.tail_tol * max(total, 1e-300):
                return math.sqrt(2.0 * math.pi) / x * total
        raise SeriesBudgetError("theta series not converged", estimate=total)
    total = 0.0
    for r in range(1, budget.max_terms + 1):
        term = math.exp(-2.0 * r * r * x * x)
        total += -term if r % 2 else term
        if term <= budget.tail_tol:
            return 1.0 + 2.0 * total
    raise SeriesBudgetError("Kolmogorov series not converged", estimate=1.0 + 2.0 * total)


def bridge_max_abs_cdf(t: float, beta: float, budget: SeriesBudget = DEFAULT_SERIES, *,
                       route: str = "series", mu: float = 0.0, printed: bool = False) -> float:
    """P(max |B^mu| < beta | B^mu(t) = 0), the Kolmogorov-Smirnov law at beta/sqrt(t).

    ``route="ratio"`` divides :func:`two_barrier_density` at ``y = 0`` by
    the free density of ``B^mu(t)`` at 0, for the given ``mu``; with the
    Girsanov weights the drift cancels.
    """
    if not (t > 0 and beta > 0):
        raise DomainError("need t > 0 and beta > 0")
    if math.isinf(beta):
        return 1.0
    if route == "series":
        return kolmogorov_series(beta / math.sqrt(t), budget)
    if route == "ratio":
        clock = DriftClock(mu, t)
        box = BarrierBox(-beta, beta)
        joint = two_barrier_density(clock, box, 0.0, budget, printed=printed)
        free = _phi(-mu * t, t)
        return joint / free
    raise ValueError(f"unknown route {route!r}")
