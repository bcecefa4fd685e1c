import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

import numpy as np

from fpme_lab.errors import InvalidArgumentError, ReportIOError
from fpme_lab.fracops import TestFunction, ring_positions
from fpme_lab.lattice import LatticeConfig
from fpme_lab.pde import DensityField

__all__ = [
    "SERIES_COLUMNS",
    "EmpiricalSeries",
    "pair_with_test_function",
    "box_average",
    "box_averages",
    "density_profile",
    "default_box_fraction",
    "pairing_series",
    "write_series_csv",
]

SERIES_COLUMNS = ("time", "value", "n", "gamma", "m", "seed", "observable")


@dataclass(frozen=True, eq=False)
class EmpiricalSeries:
    """
    Values of one observable along one trajectory.

    EmpiricalSeries(times, values, meta)

    `meta` carries n, gamma, m, seed and the observable name.
    """

    times: np.ndarray
    values: np.ndarray
    meta: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape[0] != values.shape[0]:
            raise InvalidArgumentError("times and values must have the same length")
        if np.any(np.diff(times) < 0):
            raise InvalidArgumentError("times must be sorted")
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("values must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def to_rows(self) -> List[dict]:
        return [
            {
                "time": float(t),
                "value": float(v),
                **{key: self.meta.get(key) for key in SERIES_COLUMNS[2:]},
            }
            for t, v in zip(self.times, self.values)
        ]


def pair_with_test_function(cfg: LatticeConfig, G: TestFunction, s: float, n: int) -> float:
    """<pi^n, G_s> = (1/n) sum_x G_s(x / n) eta(x)."""
    weights = G.value(s, ring_positions(cfg.size, n))
    return float(np.dot(weights, cfg.to_array())) / n


def box_averages(cfg: LatticeConfig, ell: int) -> np.ndarray:
    """(1/ell) sum_{i=1}^{ell} eta(x + i) for every site x."""
    if not 1 <= ell <= cfg.size:
        raise InvalidArgumentError(f"box length must lie in [1, {cfg.size}], got {ell}")

    eta = cfg.to_array().astype(np.int64)
    cumulative = np.concatenate(([0], np.cumsum(np.concatenate((eta, eta)))))
    x = np.arange(cfg.size)
    return (cumulative[x + 1 + ell] - cumulative[x + 1]) / ell


def box_average(cfg: LatticeConfig, x: int, ell: int) -> float:
    if ell < 1:
        raise InvalidArgumentError(f"box length must be positive, got {ell}")
    return sum(cfg.occupancy(x + i) for i in range(1, ell + 1)) / ell


def default_box_fraction(n: int, factor: float = 1.0) -> float:
    """eps = factor / sqrt(n): boxes of about sqrt(n) sites."""
    return factor / math.sqrt(n)


def density_profile(cfg: LatticeConfig, n: int, eps: float = None, time: float = 0.0) -> DensityField:
    """
    Box-averaged density at every site, ell = floor(eps n) sites to the right
    of x. Positions are the left box ends x / n; shift by ell / 2n to centre.
    """
    eps = default_box_fraction(n) if eps is None else eps
    ell = int(math.floor(eps * n + 1e-9))
    if ell < 1:
        raise InvalidArgumentError(f"eps * n must be >= 1, got {eps * n}")
    return DensityField(box_averages(cfg, ell), time, cfg.size / n)


def pairing_series(
    snapshots: Sequence[LatticeConfig],
    times: Sequence[float],
    G: TestFunction,
    n: int,
    meta=None,
) -> EmpiricalSeries:
    values = [pair_with_test_function(cfg, G, t, n) for cfg, t in zip(snapshots, times)]
    return EmpiricalSeries(np.asarray(times), np.asarray(values), dict(meta or {}))


def write_series_csv(series: Iterable[EmpiricalSeries], path) -> Path:
    """One row per (series, time) with the SERIES_COLUMNS header."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as file:
            writer = csv.DictWriter(file, fieldnames=SERIES_COLUMNS)
            writer.writeheader()
            for item in series:
                writer.writerows(item.to_rows())
    except OSError as error:
        raise ReportIOError(path, error) from error
    return path
