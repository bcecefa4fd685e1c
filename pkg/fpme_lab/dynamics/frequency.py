import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from fpme_lab.dynamics.generator import ordered_pair_rates
from fpme_lab.dynamics.params import EventLog
from fpme_lab.errors import InvalidArgumentError
from fpme_lab.kernel import JumpKernel
from fpme_lab.rates import RateModel

__all__ = ["ClassCount", "FrequencyReport", "class_rate_table", "transition_frequency_check"]

logger = logging.getLogger(__name__)


def _distance_class(z, size: int):
    z = np.mod(z, size)
    return np.minimum(z, size - z)


def class_rate_table(kernel: JumpKernel, model: RateModel) -> np.ndarray:
    """
    rates[d - 1, i]: total rate at which configuration i performs an exchange
    across ring distance d, for d = 1, ..., size // 2.
    """
    size = kernel.ring_size
    table = np.zeros((size // 2, 1 << size))

    for _, z, _, rates in ordered_pair_rates(kernel, model):
        table[_distance_class(z, size) - 1] += rates

    return table


@dataclass(frozen=True)
class ClassCount:
    distance: int
    observed: int
    expected: float

    @property
    def z_score(self) -> float:
        if self.expected == 0.0:
            return 0.0 if self.observed == 0 else float("inf")
        return (self.observed - self.expected) / np.sqrt(self.expected)


@dataclass(frozen=True)
class FrequencyReport:
    """
    Observed exchange counts per jump-distance class against their
    compensators. Counting minus compensator is a martingale, so each z-score
    is approximately standard normal.
    """

    classes: Tuple[ClassCount, ...]

    @property
    def max_abs_z(self) -> float:
        return max((abs(c.z_score) for c in self.classes), default=0.0)

    def passed(self, sigmas: float = 3.0) -> bool:
        return self.max_abs_z <= sigmas

    @property
    def total_events(self) -> int:
        return sum(c.observed for c in self.classes)


def transition_frequency_check(
    log: EventLog, kernel: JumpKernel, model: RateModel
) -> FrequencyReport:
    """
    Compare the event counts of a recorded trajectory with the exact rates:
    expected count for class d is n**gamma * int_0^T rate_d(eta_s) ds.
    """
    params = log.params
    if not params.record_events:
        raise InvalidArgumentError("the trajectory was simulated without recording events")

    size = kernel.ring_size
    table = class_rate_table(kernel, model)

    states = log.state_indices()
    boundaries = np.concatenate(([0.0], log.event_times, [params.T]))
    holding = np.diff(boundaries)

    expected = params.time_scale * (table[:, states] @ holding)
    observed = np.bincount(
        _distance_class(log.event_y - log.event_x, size) - 1, minlength=size // 2
    )

    report = FrequencyReport(
        tuple(
            ClassCount(distance=d + 1, observed=int(observed[d]), expected=float(expected[d]))
            for d in range(size // 2)
        )
    )
    logger.info(
        "transition frequencies size=%d m=%d: %d events, max |z| %.2f",
        size,
        model.m,
        report.total_events,
        report.max_abs_z,
    )
    return report
