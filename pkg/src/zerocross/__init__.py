"""Last zero-crossing laws of drifted and iterated Brownian motion.

Closed-form and quadrature evaluations live in :mod:`lastzero`,
:mod:`jointlaw`, :mod:`reflmax` and :mod:`iterated`; :mod:`mcoracle`
simulates the same random times for independent checks.
"""

from __future__ import annotations

from .errors import (BudgetExhausted, DepthError, DomainError, NonConvergenceError,
                     QuadratureBudgetError, SeriesBudgetError)
from .iterated import (NestedSpec, iter_last_zero_cdf, iter_last_zero_cdf_drifted_inner,
                       iterated_bm_pdf, nested_last_zero_cdf, nested_last_zero_pdf, nfold_last_zero_pdf,
                       nfold_mgf, nfold_moment)
from .jointlaw import (NEVER, ZeroCrossingPair, cond_last_given_return_pdf, cond_return_given_last_pdf,
                       joint_pdf, joint_survival, last_zero_no_return_density, p_never_return,
                       p_never_return_given_last, return_time_cdf, return_time_pdf, straddle_length_pdf)
from .lastzero import (DriftClock, MixtureWeight, last_zero_cdf, last_zero_cdf_infinite_horizon,
                       last_zero_mean, last_zero_mgf, last_zero_moment, last_zero_pdf, last_zero_small_mu,
                       mixture_weight)
from .mcoracle import (Estimate, McConfig, estimate, sample_extremes, sample_first_return_after,
                       sample_iterated_last_zero, sample_last_zero, sample_max_abs, sample_nested)
from .quad import QuadratureBudget, integrate_adaptive, integrate_left_sqrt_singular
from .reflmax import (BarrierBox, SeriesBudget, bridge_max_abs_cdf, max_abs_cdf, max_onesided_cdf,
                      two_barrier_density)
from .specfun import central_binomial_weight, erf, gauss_cdf, kummer_half_one

__version__ = "0.1.0"
