import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from fpme_lab.dynamics import EventLog, carre_du_champ, pair_sum, pair_sum_direct
from fpme_lab.errors import InvalidArgumentError
from fpme_lab.fracops import Kn_profile, TestFunction, discrete_gradient, ring_positions
from fpme_lab.kernel import JumpKernel
from fpme_lab.observables.empirical import pair_with_test_function
from fpme_lab.rates import Occupancy, RateModel

__all__ = [
    "generator_term",
    "generator_term_direct",
    "principal_term",
    "extra_term",
    "MartingaleEstimate",
    "martingale_path",
    "martingale_estimate",
    "quadratic_variation_bound",
    "pair_with_test_function_dt",
]

logger = logging.getLogger(__name__)


def _generator_terms(eta, values: np.ndarray):
    # (G(x) - G(y)) (eta(y) - eta(x)) as a sum of products a(x) b(y)
    e = Occupancy(eta).eta.astype(float)
    ones = np.ones_like(e)
    g = np.asarray(values, dtype=float)
    return [(g, e), (-g * e, ones), (-ones, g * e), (e, g)]


def _values(G: TestFunction, s: float, kernel: JumpKernel, n: int) -> np.ndarray:
    return G.value(s, ring_positions(kernel.ring_size, n))


def generator_term(cfg, kernel: JumpKernel, model: RateModel, G: TestFunction, n: int, s: float) -> float:
    """
    n^gamma L <pi, G_s> = (n^gamma / 4n) sum_{x,y} p(y-x) c_m [G_s(x/n) - G_s(y/n)] [eta(y) - eta(x)].
    """
    if G.is_constant:
        return 0.0
    terms = _generator_terms(cfg, _values(G, s, kernel, n))
    return n ** kernel.gamma / (4.0 * n) * pair_sum(kernel, model, cfg, terms)


def generator_term_direct(cfg, kernel: JumpKernel, model: RateModel, G: TestFunction, n: int, s: float) -> float:
    terms = _generator_terms(cfg, _values(G, s, kernel, n))
    return n ** kernel.gamma / (4.0 * n) * pair_sum_direct(kernel, model, cfg, terms)


def principal_term(cfg, kernel: JumpKernel, model: RateModel, G: TestFunction, n: int, s: float) -> float:
    """(1 / 2n) sum_x n^gamma K_n G_s(x/n) B_m(eta, x)."""
    occ = Occupancy(cfg)
    weights = model.B_m(occ, np.arange(occ.size))
    return float(np.dot(n ** kernel.gamma * Kn_profile(G, s, n, kernel), weights)) / (2.0 * n)


def extra_term(cfg, kernel: JumpKernel, model: RateModel, G: TestFunction, n: int, s: float) -> float:
    """
    R_n^G(s) = (1 / 2n^2) sum_{x,y} n^gamma [grad G(y/n) - grad G(x/n)] p(y-x) C_m(eta, x, y)
             + 1{m >= 3} (p(1) / 2n) sum_x n^gamma [G((x+1)/n) + G((x-1)/n) - 2 G(x/n)] eta(x).

    With the rates used here, generator_term = principal_term + extra_term
    for m <= 2; for m >= 3 they differ on pairs closer than m sites.
    """
    occ = Occupancy(cfg)
    values = _values(G, s, kernel, n)
    gradient = discrete_gradient(values, n)
    scale = n ** kernel.gamma

    total = 0.0
    for left, right in model.C_factors(occ):
        total += float(np.dot(left, kernel.convolve(right * gradient)))
        total -= float(np.dot(left * gradient, kernel.convolve(right)))
    total *= scale / (2.0 * n * n)

    if model.m >= 3:
        second = np.roll(values, -1) + np.roll(values, 1) - 2.0 * values
        total += kernel.folded_pmf[1] * scale * float(np.dot(second, occ.eta)) / (2.0 * n)

    return total


@dataclass(frozen=True, eq=False)
class MartingaleEstimate:
    """
    Ensemble mean, variance and standard error of M_t^n(G) at each snapshot time.

    MartingaleEstimate.from_paths(times, paths, bounds)

    `bound` is the ensemble mean of t sup_{s<=t} Gamma_s, which dominates
    E[M_t^2]; it is None when no carre du champ was recorded.
    """

    times: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    stderr: np.ndarray
    samples: int
    bound: Optional[np.ndarray] = None

    @classmethod
    def from_paths(cls, times, paths, bounds=None) -> "MartingaleEstimate":
        """One row of `paths`, and of `bounds`, per trajectory."""
        paths = np.asarray(paths, dtype=float)
        if paths.ndim != 2 or paths.shape[0] == 0:
            raise InvalidArgumentError("an ensemble needs at least one trajectory")

        samples = paths.shape[0]
        variance = paths.var(axis=0, ddof=1) if samples > 1 else np.zeros(paths.shape[1])
        return cls(
            times=np.asarray(times, dtype=float),
            mean=paths.mean(axis=0),
            variance=variance,
            stderr=np.sqrt(variance / samples),
            samples=samples,
            bound=None if bounds is None else np.asarray(bounds, dtype=float).mean(axis=0),
        )

    @property
    def max_z(self) -> float:
        """max_t |mean| / stderr; infinite where a nonzero mean has no spread."""
        mean = np.abs(self.mean)
        spread = self.stderr > 0
        if np.any(~spread & (mean > 0)):
            return math.inf
        return float(np.max(mean[spread] / self.stderr[spread], initial=0.0))

    def within(self, sigmas: float = 3.0) -> bool:
        """|mean| <= sigmas * stderr wherever the spread is nonzero; exact zero elsewhere."""
        return self.max_z <= sigmas

    @property
    def variance_ratio(self) -> float:
        """max over t > 0 of Var M_t / (t sup Gamma); 0 without a recorded bound."""
        if self.bound is None:
            return 0.0

        later = self.times > 0
        variance, bound = self.variance[later], self.bound[later]
        if np.any((bound <= 0) & (variance > 0)):
            return math.inf
        positive = bound > 0
        return float(np.max(variance[positive] / bound[positive], initial=0.0))

    def variance_allowance(self, sigmas: float = 3.0) -> float:
        """
        Largest variance_ratio consistent with Var M_t <= t sup Gamma once the
        sampling spread sqrt(2 / (samples - 1)) of a variance is allowed for.
        """
        if self.samples < 2:
            return math.inf
        return 1.0 + sigmas * math.sqrt(2.0 / (self.samples - 1))


def martingale_path(log: EventLog, G: TestFunction, n: int, kernel: JumpKernel, model: RateModel) -> np.ndarray:
    """
    M_t = <pi_t, G_t> - <pi_0, G_0> - int_0^t (d_s + n^gamma L) <pi_s, G_s> ds at the
    snapshot times, the time integral by the trapezoid rule over snapshots.
    """
    times = np.asarray(log.snapshot_times, dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise InvalidArgumentError("martingale estimates need a snapshot at t = 0")

    pairing = np.array(
        [pair_with_test_function(cfg, G, t, n) for cfg, t in zip(log.snapshots, times)]
    )
    drift = np.array(
        [
            pair_with_test_function_dt(cfg, G, t, n) + generator_term(cfg, kernel, model, G, n, t)
            for cfg, t in zip(log.snapshots, times)
        ]
    )

    integral = np.concatenate(
        ([0.0], [trapezoid(drift[: i + 1], times[: i + 1]) for i in range(1, times.size)])
    )
    return pairing - pairing[0] - integral


def pair_with_test_function_dt(cfg, G: TestFunction, s: float, n: int) -> float:
    """<pi^n, d_s G_s>."""
    weights = G.time_partial(s, ring_positions(cfg.size, n))
    return float(np.dot(weights, cfg.to_array())) / n


def martingale_estimate(
    logs: Sequence[EventLog], G: TestFunction, n: int, kernel: JumpKernel, model: RateModel
) -> MartingaleEstimate:
    if not logs:
        raise InvalidArgumentError("an ensemble needs at least one trajectory")

    estimate = MartingaleEstimate.from_paths(
        logs[0].snapshot_times,
        [martingale_path(log, G, n, kernel, model) for log in logs],
        [quadratic_variation_bound(log, G, n, kernel, model) for log in logs],
    )
    logger.info(
        "martingale n=%d: %d trajectories, max |mean| / stderr %.2f, variance ratio %.2f",
        n,
        estimate.samples,
        estimate.max_z,
        estimate.variance_ratio,
    )
    return estimate


def quadratic_variation_bound(
    log: EventLog, G: TestFunction, n: int, kernel: JumpKernel, model: RateModel
) -> np.ndarray:
    """t sup_{s<=t} Gamma_s(G) at the snapshot times, the supremum taken over snapshots."""
    times = np.asarray(log.snapshot_times, dtype=float)
    carre = np.array([carre_du_champ(cfg, kernel, model, G, n, t) for cfg, t in zip(log.snapshots, times)])
    return times * np.maximum.accumulate(carre)
