"""Joint law of the last zero before ``t`` and the first zero after ``t``.

``A = sup{s < t : B^mu(s) = 0}`` and ``R = inf{s > t : B^mu(s) = 0}``.  Under
drift the path may never come back, so ``R`` is defective: the missing mass
sits on the explicit outcome :data:`NEVER`, never on a sentinel number.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .lastzero import DriftClock, no_zero_after
from .quad import TIGHT_BUDGET, QuadratureBudget, integrate_adaptive


class Return(enum.Enum):
    NEVER = "never"


NEVER = Return.NEVER


@dataclass(frozen=True)
class ZeroCrossingPair:
    """Realised ``(A, R)``; ``b`` is :data:`NEVER` when the path does not return."""

    a: float
    b: float | Return

    def __post_init__(self):
        if self.b is not NEVER and not (self.a < self.b):
            raise DomainError(f"need a < b, got a={self.a!r}, b={self.b!r}")

    @property
    def returns(self) -> bool:
        return self.b is not NEVER

    @property
    def straddle(self) -> float | Return:
        return NEVER if self.b is NEVER else self.b - self.a


def _check_wedge(clock: DriftClock, a: float, b: float, *, allow_inf: bool = False) -> None:
    if not (0.0 < a < clock.t):
        raise DomainError(f"need 0 < a < t, got a={a!r}, t={clock.t!r}")
    if math.isinf(b) and b > 0 and allow_inf:
        return
    if not (clock.t < b < math.inf):
        raise DomainError(f"need t < b < inf, got b={b!r}, t={clock.t!r}")


def joint_survival(clock: DriftClock, a: float, b: float,
                   budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """P(A < a, R > b): no zero in ``[a, b]``.  ``b = inf`` is allowed.

    ``b = t`` is accepted as the boundary case and gives P(A < a).
    """
    if b == clock.t:
        if not (0.0 < a < clock.t):
            raise DomainError(f"need 0 < a < t, got a={a!r}")
        return no_zero_after(clock.mu2, a, b, budget)
    _check_wedge(clock, a, b, allow_inf=True)
    return no_zero_after(clock.mu2, a, b, budget)


def joint_pdf(clock: DriftClock, a: float, b: float) -> float:
    """Joint density exp(-mu**2 b/2) / (2 pi sqrt(a (b-a)**3)) on 0 < a < t < b."""
    _check_wedge(clock, a, b)
    d = b - a
    return math.exp(-0.5 * clock.mu2 * b) / (2.0 * math.pi * math.sqrt(a * d * d * d))


def return_time_pdf(clock: DriftClock, b: float) -> float:
    """Density of R at ``b > t``; integrates to 1 - P(R = NEVER)."""
    t = clock.t
    if not (t < b < math.inf):
        raise DomainError(f"need t < b < inf, got b={b!r}, t={t!r}")
    return math.exp(-0.5 * clock.mu2 * b) * math.sqrt(t / (b - t)) / (math.pi * b)


def p_never_return(clock: DriftClock) -> float:
    """P(R = NEVER) = erf(|mu| sqrt(t/2)); increases with both t and |mu|."""
    return math.erf(math.sqrt(0.5 * clock.mu2 * clock.t))


def return_time_cdf(clock: DriftClock, b: float,
                    budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """P(R <= b) for finite ``b >= t``; tends to 1 - P(NEVER) as b grows."""
    t = clock.t
    if not (t <= b):
        raise DomainError(f"need b >= t, got b={b!r}")
    if b == t:
        return 0.0
    # R <= b  iff  the last zero before b lies after t
    return 1.0 - no_zero_after(clock.mu2, t, b, budget)


def cond_last_given_return_pdf(t: float, a: float, b: float) -> float:
    """Density of A at ``a`` given R = ``b``; the drift cancels out."""
    if not (0.0 < a < t < b < math.inf):
        raise DomainError(f"need 0 < a < t < b, got a={a!r}, t={t!r}, b={b!r}")
    d = b - a
    return b / (2.0 * math.sqrt(a * t)) * math.sqrt((b - t) / (d * d * d))


def _scaled_denominator(mu2: float, t: float, a: float, budget: QuadratureBudget) -> float:
    # exp(-mu2 (t-a)/2) + mu2 sqrt(a (t-a)) int_0^Y exp(-mu2 a y^2/2) dy
    # = exp(-mu2 (t-a)/2) times the bracket in the conditional law of R given A
    if mu2 == 0.0:
        return 1.0
    c = 0.5 * mu2 * a

    def f(y):
        return math.exp(-c * y * y)

    integral = integrate_adaptive(f, 0.0, math.sqrt((t - a) / a), budget)
    return math.exp(-0.5 * mu2 * (t - a)) + mu2 * math.sqrt(a * (t - a)) * integral


def cond_return_given_last_pdf(clock: DriftClock, a: float, b: float,
                               budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """Density of R at ``b`` given A = ``a``; defective when mu != 0."""
    _check_wedge(clock, a, b)
    mu2, t = clock.mu2, clock.t
    d = b - a
    num = 0.5 * math.sqrt((t - a) / (d * d * d)) * math.exp(-0.5 * mu2 * (b - a))
    return num / _scaled_denominator(mu2, t, a, budget)


def p_never_return_given_last(clock: DriftClock, a: float,
                              budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """P(R = NEVER | A = a)."""
    if not (0.0 < a < clock.t):
        raise DomainError(f"need 0 < a < t, got a={a!r}, t={clock.t!r}")
    mu2, t = clock.mu2, clock.t
    if mu2 == 0.0:
        return 0.0
    num = math.sqrt(0.5 * math.pi * mu2 * (t - a))
    return num / _scaled_denominator(mu2, t, a, budget)


def last_zero_no_return_density(mu: float, a: float) -> float:
    """Density of {A in da, R = NEVER}: |mu| exp(-mu**2 a/2) / sqrt(2 pi a)."""
    if not a > 0:
        raise DomainError(f"need a > 0, got {a!r}")
    mu2 = mu * mu
    return math.sqrt(mu2) * math.exp(-0.5 * mu2 * a) / math.sqrt(2.0 * math.pi * a)


def straddle_length_pdf(clock: DriftClock, w: float) -> float:
    """Density of the finite length R - A of the zero-free interval around t."""
    if not (0.0 < w < math.inf):
        raise DomainError(f"need w > 0, got {w!r}")
    mu2, t = clock.mu2, clock.t
    lo = max(0.0, t - w)
    # int_lo^t exp(-mu2 a/2) / sqrt(a) da, by a = x^2
    if mu2 == 0.0:
        inner = 2.0 * (math.sqrt(t) - math.sqrt(lo))
    else:
        c = math.sqrt(0.5 * mu2)
        inner = math.sqrt(math.pi) / c * (math.erf(c * math.sqrt(t)) - math.erf(c * math.sqrt(lo)))
    return math.exp(-0.5 * mu2 * w) / (2.0 * math.pi * w ** 1.5) * inner


def last_zero_pdf_from_joint(clock: DriftClock, a: float,
                             budget: QuadratureBudget = TIGHT_BUDGET) -> float:
    """int_t^inf joint_pdf(a, b) db + no-return density; reproduces the marginal.

    The b-integral is done in closed form: with b = a + v,
    int_{t-a}^inf exp(-mu2 (a+v)/2) v^{-3/2} dv / (2 pi sqrt(a)).
    """
    if not (0.0 < a < clock.t):
        raise DomainError(f"need 0 < a < t, got a={a!r}")
    mu2, t = clock.mu2, clock.t
    v0 = t - a
    # int_{v0}^inf e^{-c v} v^{-3/2} dv = 2 e^{-c v0}/sqrt(v0) - 2 sqrt(pi c) erfc(sqrt(c v0))
    c = 0.5 * mu2
    tail = 2.0 * math.exp(-c * v0) / math.sqrt(v0)
    if c > 0.0:
        tail -= 2.0 * math.sqrt(math.pi * c) * math.erfc(math.sqrt(c * v0))
    finite_part = math.exp(-c * a) * tail / (2.0 * math.pi * math.sqrt(a))
    return finite_part + last_zero_no_return_density(clock.mu, a)


__all__ = [
    "NEVER", "Return", "ZeroCrossingPair", "joint_survival", "joint_pdf",
    "return_time_pdf", "return_time_cdf", "p_never_return", "cond_last_given_return_pdf",
    "cond_return_given_last_pdf", "p_never_return_given_last",
    "last_zero_no_return_density", "straddle_length_pdf", "last_zero_pdf_from_joint",
]
