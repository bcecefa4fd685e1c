import logging

import numpy as np

from fpme_lab.dynamics.compiled import process_candidates
from fpme_lab.dynamics.params import EventLog, SimParams
from fpme_lab.errors import EnvelopeViolationError, InvalidArgumentError
from fpme_lab.kernel import JumpKernel
from fpme_lab.lattice import LatticeConfig
from fpme_lab.rates import RateModel
from fpme_lab.utils import make_rng

__all__ = ["simulate", "envelope_rate", "waiting_time_mean"]

logger = logging.getLogger(__name__)


def envelope_rate(size: int, model: RateModel) -> float:
    """
    Candidate rate per microscopic time unit, size * (2m + 1) / 2. Each
    ordered candidate (x, x + z) arrives at rate (2m + 1) p(z) / 2 and is kept
    with probability xi c_m / (2 (2m + 1)), giving bond rate p(z) c_m / 2.
    """
    return size * model.max_rate / 2.0


class _Buffers:
    def __init__(self, enabled: bool, chunk: int):
        self.enabled = enabled
        capacity = 4 * chunk if enabled else 0
        self.times = np.empty(capacity)
        self.x = np.empty(capacity, dtype=np.int64)
        self.y = np.empty(capacity, dtype=np.int64)
        self.count = 0

    def reserve(self, extra: int) -> None:
        if not self.enabled or self.count + extra <= self.times.size:
            return
        capacity = max(2 * self.times.size, self.count + extra)
        self.times = np.resize(self.times, capacity)
        self.x = np.resize(self.x, capacity)
        self.y = np.resize(self.y, capacity)

    def trimmed(self):
        n = self.count
        return self.times[:n].copy(), self.x[:n].copy(), self.y[:n].copy()


def simulate(
    params: SimParams, kernel: JumpKernel, model: RateModel, init: LatticeConfig
) -> EventLog:
    """
    Sample the exclusion process with generator n**gamma L up to time T.

    Candidates arrive at the constant envelope rate; each draws x uniform on
    the ring and z from the folded kernel and is thinned to the true rate.
    Snapshots are taken at the requested times; the configuration is
    unchanged between accepted events, so a snapshot sees exactly the events
    before it. Deterministic given params.seed.
    """
    size = init.size
    if kernel.ring_size != size or params.ring_size != size:
        raise InvalidArgumentError(
            f"ring sizes disagree: params {params.ring_size}, kernel {kernel.ring_size}, "
            f"configuration {size}"
        )
    if model.m != params.m or kernel.gamma != params.gamma:
        raise InvalidArgumentError("kernel and rate model must match params")

    rng = make_rng(params.seed)
    words = init.bits.copy()
    chunk = params.chunk_size
    mean_wait = 1.0 / (envelope_rate(size, model) * params.time_scale)
    accept_scale = 1.0 / (2.0 * model.max_rate)

    buffers = _Buffers(params.record_events, chunk)
    snapshots = []
    t = 0.0
    proposals = accepted = 0
    max_ratio = 0.0

    waits = xs = zs = us = None
    index = chunk

    targets = list(params.snapshot_times)
    if not targets or targets[-1] < params.T:
        targets.append(params.T)

    logger.debug(
        "simulate size=%d m=%d gamma=%g T=%g seed=%d", size, model.m, params.gamma, params.T, params.seed
    )

    for target in targets:
        while True:
            if index == chunk:
                waits = rng.exponential(mean_wait, chunk)
                xs = rng.integers(0, size, chunk)
                zs = kernel.sample_jumps(rng, chunk)
                us = rng.random(chunk)
                index = 0

            buffers.reserve(chunk - index)
            start = index
            index, t, done, buffers.count, ratio = process_candidates(
                words,
                size,
                model.m,
                t,
                target,
                waits,
                xs,
                zs,
                us,
                start,
                accept_scale,
                buffers.enabled,
                buffers.times,
                buffers.x,
                buffers.y,
                buffers.count,
            )
            proposals += index - start
            accepted += done
            max_ratio = max(max_ratio, ratio)

            if max_ratio > 1.0:
                raise EnvelopeViolationError(
                    f"acceptance probability {max_ratio:.6g} exceeds 1"
                )

            if index < chunk:
                break

        if target in params.snapshot_times:
            snapshots.append(LatticeConfig(size, words.copy()))

    logger.debug(
        "simulate done: %d proposals, %d accepted, max acceptance %.3f",
        proposals,
        accepted,
        max_ratio,
    )

    times, event_x, event_y = buffers.trimmed()
    return EventLog(
        params=params,
        initial=init.copy(),
        final=LatticeConfig(size, words),
        snapshot_times=params.snapshot_times,
        snapshots=snapshots,
        event_times=times,
        event_x=event_x,
        event_y=event_y,
        proposals=proposals,
        accepted=accepted,
        max_acceptance=max_ratio,
    )


def waiting_time_mean(log: EventLog) -> float:
    """Mean macroscopic time between accepted events; inf without events."""
    if log.accepted == 0:
        return float("inf")
    return log.params.T / log.accepted
