"""Exception hierarchy shared by the analytic modules and the CLI."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the support of the requested law."""


class DepthError(DomainError):
    """Analytic evaluation refused at this nesting depth."""


class BudgetExhausted(ArithmeticError):
    """A numerical budget ran out before the requested accuracy was met.

    Carries the best available estimate, its error bound and the name of
    the module that gave up, so callers can decide whether to accept it.
    """

    module = "zerocross"

    def __init__(self, message: str, estimate: float = float("nan"),
                 error: float = float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class QuadratureBudgetError(BudgetExhausted):
    module = "quad"


class SeriesBudgetError(BudgetExhausted):
    module = "reflmax"


class NonConvergenceError(BudgetExhausted):
    module = "iterated"
