"""Monte Carlo oracle: simulated drifted Brownian paths and plug-in estimates.

Paths are split into shards.  Shard ``i`` draws from
``numpy.random.default_rng(splitmix64(seed, i))`` and results are merged
in shard order, so a given ``(seed, shards, paths)`` always gives the same
samples no matter how many threads run the shards.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError
from .iterated import NestedSpec

DEFAULT_SEED = 20240617
_MASK64 = (1 << 64) - 1


def splitmix64(seed: int, stream: int) -> int:
    """SplitMix64 output for state ``seed + (stream + 1) * golden gamma``."""
    z = (seed + (stream + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class McConfig:
    paths: int = 200_000
    dt: float = 1e-4
    seed: int = DEFAULT_SEED
    shards: int = 8
    bridge_correction: bool = True
    threads: int = 1

    def __post_init__(self):
        if int(self.paths) != self.paths or self.paths < 1000:
            raise DomainError(f"paths must be an integer >= 1000, got {self.paths!r}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise DomainError(f"dt must be positive, got {self.dt!r}")
        if int(self.shards) != self.shards or self.shards < 1:
            raise DomainError(f"shards must be a positive integer, got {self.shards!r}")
        if int(self.threads) != self.threads or self.threads < 1:
            raise DomainError(f"threads must be a positive integer, got {self.threads!r}")
        if not (0 <= int(self.seed) <= _MASK64):
            raise DomainError("seed must fit in 64 unsigned bits")

    def shard_sizes(self) -> list[int]:
        base, extra = divmod(int(self.paths), int(self.shards))
        return [base + (i < extra) for i in range(int(self.shards))]

    def check_horizon(self, t: float) -> None:
        if not (math.isfinite(t) and t > 0):
            raise DomainError(f"t must be positive, got {t!r}")
        if self.dt > t / 100.0:
            raise DomainError(f"need dt <= t/100, got dt={self.dt}, t={t}")


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    n: int

    def z_score(self, reference: float) -> float:
        if self.std_error == 0.0:
            return 0.0 if self.value == reference else math.copysign(math.inf, self.value - reference)
        return (self.value - reference) / self.std_error

    def within(self, reference: float, k: float = 3.0, slack: float = 0.0) -> bool:
        return abs(self.value - reference) <= k * self.std_error + slack


def _run_shards(cfg: McConfig, work: Callable[[np.random.Generator, int], tuple]) -> list[tuple]:
    sizes = cfg.shard_sizes()
    jobs = [(np.random.default_rng(splitmix64(int(cfg.seed), i)), n) for i, n in enumerate(sizes)]
    if cfg.threads == 1 or len(jobs) == 1:
        return [work(rng, n) for rng, n in jobs]
    with ThreadPoolExecutor(max_workers=min(int(cfg.threads), len(jobs))) as pool:
        return list(pool.map(lambda job: work(*job), jobs))


def _concat(parts: list[tuple], i: int) -> np.ndarray:
    return np.concatenate([p[i] for p in parts])


# --- samplers ------------------------------------------------------------------

def sample_last_zero(mu: float, t: float, cfg: McConfig) -> np.ndarray:
    """Last zero before ``t`` of each simulated path, in ``[0, t]``."""
    cfg.check_horizon(t)

    def work(rng, n):
        out = np.empty(n)
        _kernels.last_zero_kernel(rng, float(mu), float(t), cfg.dt, cfg.bridge_correction, out)
        return (out,)

    return _concat(_run_shards(cfg, work), 0)


@dataclass(frozen=True)
class ReturnSamples:
    """Per path: last zero ``last`` before t and first zero ``times`` after t.

    ``times`` is NaN where ``censored`` is set, i.e. no zero in ``(t, horizon]``.
    """

    last: np.ndarray
    times: np.ndarray
    censored: np.ndarray
    t: float
    horizon: float

    def __len__(self) -> int:
        return self.times.shape[0]

    def censored_fraction(self) -> Estimate:
        return estimate(self.censored.astype(float), "mean")

    def return_cdf(self, b: float) -> Estimate:
        """P(R <= b) for ``t < b <= horizon``; censored paths count as R > b."""
        if not (self.t < b <= self.horizon):
            raise DomainError(f"need t < b <= horizon, got b={b!r}")
        hit = np.where(self.censored, False, self.times <= b)
        return estimate(hit.astype(float), "mean")


def sample_zero_pairs(mu: float, t: float, horizon: float, cfg: McConfig) -> ReturnSamples:
    """Joint samples of the last zero before ``t`` and first zero after it."""
    cfg.check_horizon(t)
    if not horizon > t:
        raise DomainError(f"need horizon > t, got horizon={horizon!r}, t={t!r}")

    def work(rng, n):
        a = np.empty(n)
        b = np.empty(n)
        c = np.empty(n, dtype=np.bool_)
        _kernels.zero_pair_kernel(rng, float(mu), float(t), float(horizon), cfg.dt,
                                  cfg.bridge_correction, a, b, c)
        return a, b, c

    parts = _run_shards(cfg, work)
    return ReturnSamples(_concat(parts, 0), _concat(parts, 1), _concat(parts, 2),
                         float(t), float(horizon))


def sample_first_return_after(mu: float, t: float, horizon: float, cfg: McConfig) -> ReturnSamples:
    """First zero after ``t``, censored at ``horizon``; see :class:`ReturnSamples`."""
    return sample_zero_pairs(mu, t, horizon, cfg)


@dataclass(frozen=True)
class ExtremeSamples:
    end: np.ndarray
    max: np.ndarray
    min: np.ndarray

    @property
    def max_abs(self) -> np.ndarray:
        return np.maximum(self.max, -self.min)

    def confined(self, alpha: float, beta: float) -> np.ndarray:
        return (self.min > alpha) & (self.max < beta)


def sample_extremes(mu: float, t: float, cfg: McConfig) -> ExtremeSamples:
    """Endpoint, running maximum and running minimum of each path on ``[0, t]``."""
    cfg.check_horizon(t)

    def work(rng, n):
        e, hi, lo = np.empty(n), np.empty(n), np.empty(n)
        _kernels.extremes_kernel(rng, float(mu), float(t), cfg.dt, cfg.bridge_correction, e, hi, lo)
        return e, hi, lo

    parts = _run_shards(cfg, work)
    return ExtremeSamples(_concat(parts, 0), _concat(parts, 1), _concat(parts, 2))


def sample_max_abs(mu: float, t: float, cfg: McConfig) -> np.ndarray:
    """max_{s <= t} |B^mu(s)| per path."""
    return sample_extremes(mu, t, cfg).max_abs


def sample_confinement(mu: float, t: float, alpha: float, beta: float, cfg: McConfig) -> Estimate:
    """P(alpha < min B^mu, max B^mu < beta) on ``[0, t]``."""
    return estimate(sample_extremes(mu, t, cfg).confined(alpha, beta).astype(float), "mean")


def sample_nested(spec: NestedSpec, cfg: McConfig) -> np.ndarray:
    """n-fold nested last zero: each level runs a fresh path up to the previous level's zero."""
    cfg.check_horizon(spec.t)
    drifts = np.asarray(spec.drifts, dtype=float)

    def work(rng, n):
        out = np.empty(n)
        _kernels.nested_kernel(rng, drifts, float(spec.t), cfg.dt, cfg.bridge_correction, out)
        return (out,)

    return _concat(_run_shards(cfg, work), 0)


def _iterated(mu1, mu2, t, cfg, one_sided):
    cfg.check_horizon(t)

    def work(rng, n):
        w = np.empty(n)
        out = np.empty(n)
        _kernels.iterated_kernel(rng, float(mu1), float(mu2), float(t), cfg.dt,
                                 cfg.bridge_correction, bool(one_sided), w, out)
        return (out,)

    return _concat(_run_shards(cfg, work), 0)


def sample_iterated_last_zero(mu: float, t: float, cfg: McConfig, *, mu2: float = 0.0,
                              horizon_kind: str = "abs-max") -> np.ndarray:
    """Last zero of B1^mu before the inner motion's max |B2^{mu2}| (or max B2^{mu2}) on [0, t]."""
    if horizon_kind not in ("abs-max", "one-sided-max"):
        raise ValueError(f"unknown horizon_kind {horizon_kind!r}")
    return _iterated(mu, mu2, t, cfg, horizon_kind == "one-sided-max")


def sample_iterated_bm(mu1: float, mu2: float, t: float, cfg: McConfig) -> np.ndarray:
    """Exact draws of B1^{mu1}(|B2^{mu2}(t)|); no path is needed."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")

    def work(rng, n):
        s = np.abs(mu2 * t + math.sqrt(t) * rng.standard_normal(n))
        return (mu1 * s + np.sqrt(s) * rng.standard_normal(n),)

    return _concat(_run_shards(cfg, work), 0)


# --- estimators ------------------------------------------------------------------

def _functional_values(x: np.ndarray, functional: str, arg: float | None) -> np.ndarray:
    if functional == "mean":
        return x
    if functional == "cdf-at":
        if arg is None:
            raise ValueError("cdf-at needs a point x")
        return (x < arg).astype(float)
    if functional == "moment":
        if arg is None or int(arg) != arg or arg < 1:
            raise ValueError("moment needs a positive integer order m")
        return x ** int(arg)
    raise ValueError(f"unknown functional {functional!r}; use 'cdf-at', 'moment' or 'mean'")


def estimate(samples: Sequence[float] | np.ndarray, functional: str = "mean",
             arg: float | None = None) -> Estimate:
    """Plug-in estimate of ``E[f(X)]`` with standard error ``std / sqrt(n)``.

    ``functional`` is ``"mean"``, ``"cdf-at"`` (``arg`` = point x, estimates
    ``P(X < x)``) or ``"moment"`` (``arg`` = order m).  NaN samples are
    rejected; filter censored values first.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("cannot estimate from an empty sample")
    if np.isnan(x).any():
        raise ValueError("samples contain NaN; drop censored entries first")
    v = _functional_values(x, functional, arg)
    n = v.size
    if v.min() == v.max():
        # summation rounding would otherwise leave a spurious ~1e-18 spread
        return Estimate(float(v[0]), 0.0, int(n))
    return Estimate(float(v.mean()), float(v.std() / math.sqrt(n)), int(n))


def export_csv(samples: Sequence[float] | np.ndarray, path, header: str = "value") -> None:
    """Write one sample per line under a single header, 17 significant digits."""
    x = np.asarray(samples, dtype=float)
    np.savetxt(path, x, fmt="%.17g", header=header, comments="")
