"""Analytic-versus-oracle self-test suites behind ``zerocross selftest``.

``quick`` runs analytic identities only (a few seconds).  ``full`` adds
seeded Monte Carlo comparisons at a moderate path count.  Reports contain
no timings, so two runs with the same seed are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import iterated, jointlaw, lastzero, reflmax
from .lastzero import DriftClock
from .mcoracle import DEFAULT_SEED, McConfig, estimate, sample_extremes, sample_first_return_after
from .mcoracle import sample_iterated_last_zero, sample_last_zero, sample_nested
from .quad import integrate_left_sqrt_singular, integrate_sqrt_endpoints
from .specfun import kummer_half_one

SUITES = ("quick", "full")


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    reference: float
    tolerance: float
    std_error: float = 0.0

    @property
    def passed(self) -> bool:
        return abs(self.value - self.reference) <= self.tolerance

    def row(self) -> dict:
        return {"check": self.name, "value": self.value, "reference": self.reference,
                "tolerance": self.tolerance, "std_error": self.std_error,
                "verdict": "PASS" if self.passed else "FAIL"}


def _analytic_checks() -> list[Callable[[], CheckResult]]:
    c01 = DriftClock(0.0, 1.0)
    c11 = DriftClock(1.0, 1.0)

    def arcsine():
        return CheckResult("lastzero.cdf arcsine (0,1,0.25)", lastzero.last_zero_cdf(c01, 0.25),
                           1.0 / 3.0, 1e-10)

    def forms():
        vals = [lastzero.last_zero_cdf(c11, 0.3, form=f) for f in lastzero.CDF_FORMS]
        return CheckResult("lastzero.cdf form spread (1,1,0.3)", max(vals) - min(vals), 0.0, 1e-8)

    def norm():
        v = integrate_sqrt_endpoints(lambda a: lastzero.last_zero_pdf(c11, a) if 0 < a < 1 else 0.0,
                                     0.0, 1.0)
        return CheckResult("lastzero.pdf normalization (1,1)", v, 1.0, 1e-8)

    def mean():
        return CheckResult("lastzero.moment m=1 (sqrt2,1)",
                           lastzero.last_zero_moment(DriftClock(math.sqrt(2.0), 1.0), 1),
                           (1.0 - math.exp(-1.0)) / 2.0, 1e-12)

    def gamma_limit():
        return CheckResult("lastzero.cdf t=1e4 vs erf(sqrt(a/2)) a=2",
                           lastzero.last_zero_cdf(DriftClock(1.0, 1e4), 2.0), math.erf(1.0), 1e-3)

    def marginal():
        a = 0.4
        return CheckResult("jointlaw marginal consistency (1,1,0.4)",
                           jointlaw.last_zero_pdf_from_joint(c11, a), lastzero.last_zero_pdf(c11, a), 1e-7)

    def cond_norm():
        v = integrate_sqrt_endpoints(
            lambda a: jointlaw.cond_last_given_return_pdf(1.0, a, 2.0) if 0 < a < 1 else 0.0, 0.0, 1.0)
        return CheckResult("jointlaw cond_last normalization (1,2)", v, 1.0, 1e-10)

    def never():
        clock = DriftClock(1.0, 2.0)
        v = jointlaw.p_never_return(clock)
        # sqrt(a) times the density is smooth
        mass = integrate_left_sqrt_singular(
            lambda a: math.sqrt(a) * jointlaw.last_zero_no_return_density(1.0, a) if a > 0 else 1.0 / math.sqrt(2.0 * math.pi),
            0.0, 2.0)
        return CheckResult("jointlaw never-return mass (1,2)", v, mass, 1e-8)

    def ks():
        return CheckResult("reflmax bridge KS (1,1)", reflmax.bridge_max_abs_cdf(1.0, 1.0),
                           1.0 - 2.0 * sum((-1) ** (r + 1) * math.exp(-2.0 * r * r) for r in range(1, 8)),
                           1e-12)

    def bridge_mu():
        vals = [reflmax.bridge_max_abs_cdf(1.0, 1.0, route="ratio", mu=m) for m in (0.0, 0.7, 1.5)]
        return CheckResult("reflmax bridge ratio mu spread", max(vals) - min(vals), 0.0, 1e-8)

    def onesided():
        clock = DriftClock(0.5, 1.0)
        return CheckResult("reflmax onesided routes (0.5,1,1)",
                           reflmax.max_onesided_cdf(clock, 1.0),
                           reflmax.max_onesided_cdf(clock, 1.0, route="passage"), 1e-8)

    def nested0():
        a = 0.5
        ref = 2.0 / math.pi * math.asin(math.sqrt(a)) + integrate_sqrt_endpoints(
            lambda w: (2.0 / math.pi * math.asin(math.sqrt(a / w)) / (math.pi * math.sqrt(w * (1.0 - w)))
                       if a < w < 1.0 else 0.0), a, 1.0)
        return CheckResult("iterated nested cdf driftless (1,0.5)",
                           iterated.nested_last_zero_cdf(0.0, 0.0, 1.0, a), ref, 1e-9)

    def nfold_mgf():
        return CheckResult("iterated nfold_mgf n=1 vs 1F1", iterated.nfold_mgf(1, 1.0, 1.0),
                           kummer_half_one(1.0), 1e-12)

    def iter_limit():
        return CheckResult("iterated iter cdf a=1e3", iterated.iter_last_zero_cdf(1.0, 1.0, 1e3), 1.0, 1e-6)

    return [arcsine, forms, norm, mean, gamma_limit, marginal, cond_norm, never, ks, bridge_mu,
            onesided, nested0, nfold_mgf, iter_limit]


def _mc_checks(seed: int, threads: int) -> list[Callable[[], CheckResult]]:
    cfg = McConfig(paths=20_000, dt=1e-3, seed=seed, shards=4, threads=threads)

    def mc(name, est, ref):
        return CheckResult(name, est.value, ref, 3.0 * est.std_error, est.std_error)

    def last_zero():
        s = sample_last_zero(1.0, 1.0, cfg)
        return [mc(f"mc lastzero cdf (1,1,{a})", estimate(s, "cdf-at", a),
                   lastzero.last_zero_cdf(DriftClock(1.0, 1.0), a)) for a in (0.2, 0.5, 0.8)]

    def max_abs():
        s = sample_extremes(1.0, 1.0, cfg).max_abs
        return [mc(f"mc maxabs cdf (1,1,{b})", estimate(s, "cdf-at", b),
                   reflmax.max_abs_cdf(DriftClock(1.0, 1.0), b)) for b in (0.75, 1.0, 1.5)]

    def never():
        r = sample_first_return_after(1.0, 2.0, 50.0, cfg)
        return [mc("mc never-return (1,2)", r.censored_fraction(),
                   jointlaw.p_never_return(DriftClock(1.0, 2.0)))]

    def iterated_lz():
        s = sample_iterated_last_zero(1.0, 1.0, cfg)
        return [mc(f"mc iterated cdf (1,1,{a})", estimate(s, "cdf-at", a),
                   iterated.iter_last_zero_cdf(1.0, 1.0, a)) for a in (0.25, 0.5, 1.0)]

    def nested():
        out = []
        for n in (2, 3):
            s = sample_nested(iterated.NestedSpec(n, t=1.0), cfg)
            out.append(mc(f"mc nfold mean n={n}", estimate(s, "mean"), iterated.nfold_moment(n, 1, 1.0)))
        return out

    return [last_zero, max_abs, never, iterated_lz, nested]


def run_suite(suite: str = "quick", seed: int = DEFAULT_SEED, threads: int = 1) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    results = [check() for check in _analytic_checks()]
    if suite == "full":
        for group in _mc_checks(seed, threads):
            results.extend(group())
    return results
