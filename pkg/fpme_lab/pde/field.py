import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from fpme_lab.errors import ReportIOError
from fpme_lab.measures import ProfileSpec

__all__ = ["DensityField", "grid_positions", "sample_profile", "range_check", "write_fields_csv"]

CLIP_TOLERANCE = 1e-10


def grid_positions(grid_size: int, torus_length: float) -> np.ndarray:
    return np.arange(grid_size) * (torus_length / grid_size)


@dataclass(frozen=True, eq=False)
class DensityField:
    """
    Density samples rho(time, u_i) on the uniform periodic grid
    u_i = i * torus_length / grid_size.
    """

    values: np.ndarray
    time: float
    torus_length: float = 2.0

    @property
    def grid_size(self) -> int:
        return self.values.size

    @property
    def step(self) -> float:
        return self.torus_length / self.grid_size

    @property
    def positions(self) -> np.ndarray:
        return grid_positions(self.grid_size, self.torus_length)

    @property
    def mass(self) -> float:
        return self.step * float(np.sum(self.values))

    def pairing(self, weights: np.ndarray) -> float:
        """<rho, w> by the periodic rectangle rule."""
        return self.step * float(np.dot(self.values, weights))


def sample_profile(g: ProfileSpec, grid_size: int, torus_length: float) -> DensityField:
    return DensityField(g.density(grid_positions(grid_size, torus_length)), 0.0, torus_length)


def range_check(rho: DensityField) -> Tuple[float, float]:
    return float(np.min(rho.values)), float(np.max(rho.values))


def write_fields_csv(fields: Sequence[DensityField], path) -> Path:
    """One row per (time, u) with columns time, u, rho."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as file:
            writer = csv.writer(file)
            writer.writerow(["time", "u", "rho"])
            for rho in fields:
                for u, value in zip(rho.positions, rho.values):
                    writer.writerow([repr(rho.time), repr(float(u)), repr(float(value))])
    except OSError as error:
        raise ReportIOError(path, error) from error
    return path
