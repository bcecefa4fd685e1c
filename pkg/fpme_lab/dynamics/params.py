from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.kernel import check_gamma
from fpme_lab.lattice import LatticeConfig
from fpme_lab.utils import field_required

__all__ = ["SimParams", "EventLog"]


@dataclass(frozen=True)
class SimParams:
    """
    Parameters of one trajectory.

    SimParams(n=n, T=T, gamma=gamma, m=m, seed=seed, snapshot_times=times)

    The ring has round(n * torus_length) sites; a macroscopic time unit is
    n**gamma microscopic time units.
    """

    n: int = field(default_factory=field_required)
    T: float = field(default_factory=field_required)
    gamma: float = field(default_factory=field_required)
    m: int = field(default_factory=field_required)
    seed: int = 0
    snapshot_times: Tuple[float, ...] = ()
    torus_length: float = 2.0
    record_events: bool = False
    chunk_size: int = 1 << 16

    def __post_init__(self):
        if self.n < 2:
            raise InvalidArgumentError(f"n must be >= 2, got {self.n}")
        if not self.T > 0:
            raise InvalidArgumentError(f"T must be positive, got {self.T}")
        check_gamma(self.gamma)

        times = tuple(sorted(set(float(t) for t in self.snapshot_times)))
        if times and (times[0] < 0 or times[-1] > self.T):
            raise InvalidArgumentError(f"snapshot times must lie in [0, {self.T}]")
        object.__setattr__(self, "snapshot_times", times)

    @property
    def ring_size(self) -> int:
        return int(round(self.n * self.torus_length))

    @property
    def time_scale(self) -> float:
        return float(self.n) ** self.gamma


@dataclass(frozen=True, eq=False)
class EventLog:
    """
    Trajectory record of `simulate`.

    Event arrays are empty unless the run recorded events. `snapshots[i]` is
    the configuration at macroscopic time `snapshot_times[i]`.
    """

    params: SimParams
    initial: LatticeConfig
    final: LatticeConfig
    snapshot_times: Tuple[float, ...]
    snapshots: List[LatticeConfig]
    event_times: np.ndarray
    event_x: np.ndarray
    event_y: np.ndarray
    proposals: int
    accepted: int
    max_acceptance: float

    def __len__(self) -> int:
        return self.accepted

    @property
    def events(self):
        return zip(self.event_times.tolist(), self.event_x.tolist(), self.event_y.tolist())

    def snapshot_at(self, time: float) -> LatticeConfig:
        try:
            return self.snapshots[self.snapshot_times.index(float(time))]
        except ValueError:
            raise InvalidArgumentError(f"no snapshot recorded at t={time}") from None

    def state_indices(self) -> np.ndarray:
        """
        Configuration index before the first event and after each event
        (site x is bit x), for rings small enough to enumerate.
        """
        masks = (np.int64(1) << self.event_x.astype(np.int64)) | (
            np.int64(1) << self.event_y.astype(np.int64)
        )
        start = np.int64(self.initial.to_index())
        return np.concatenate(([start], start ^ np.bitwise_xor.accumulate(masks)))
