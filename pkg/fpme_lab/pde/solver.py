import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from more_properties import cached_property

from fpme_lab.errors import InvalidArgumentError, SolverInstabilityError
from fpme_lab.fracops import symbol, wavenumbers
from fpme_lab.kernel import check_gamma
from fpme_lab.measures import ProfileSpec
from fpme_lab.pde.field import CLIP_TOLERANCE, DensityField, grid_positions, sample_profile
from fpme_lab.utils import field_required

__all__ = ["INTEGRATORS", "SolverConfig", "solve_fpme", "exact_linear_solution"]

logger = logging.getLogger(__name__)

INTEGRATORS = ("rk4_spectral", "exact_linear")

INSTABILITY_BOUND = 1.5


@dataclass(frozen=True)
class SolverConfig:
    """
    Pseudospectral solver settings for d_t rho = -(-Delta)^{gamma/2} rho^m.

    SolverConfig(grid_size=N, gamma=gamma, m=m, dt=dt)

    dt defaults to the stability bound 0.5 / (m * kappa |k_max|^gamma),
    k_max = pi N / torus_length, and may not exceed it.
    """

    grid_size: int = field(default_factory=field_required)
    gamma: float = field(default_factory=field_required)
    m: int = field(default_factory=field_required)
    dt: Optional[float] = None
    integrator: str = "rk4_spectral"
    torus_length: float = 2.0
    dealias: bool = False

    def __post_init__(self):
        if self.integrator not in INTEGRATORS:
            raise InvalidArgumentError(f"unknown integrator '{self.integrator}'")
        if self.grid_size < 4:
            raise InvalidArgumentError(f"grid_size must be >= 4, got {self.grid_size}")
        if self.m < 1:
            raise InvalidArgumentError(f"m must be positive, got {self.m}")
        if self.integrator == "exact_linear" and self.m != 1:
            raise InvalidArgumentError("the exact solution exists only for m = 1")
        if self.gamma != 2.0:
            check_gamma(self.gamma)

        if self.dt is None:
            object.__setattr__(self, "dt", self.dt_stable)
        elif not 0.0 < self.dt <= self.dt_stable * (1.0 + 1e-12):
            raise InvalidArgumentError(
                f"dt={self.dt} outside (0, {self.dt_stable:.6g}] for this grid"
            )

    @property
    def dt_stable(self) -> float:
        k_max = math.pi * self.grid_size / self.torus_length
        return 0.5 / (self.m * float(symbol(np.array([k_max]), self.gamma)[0]))

    @cached_property
    def multiplier(self) -> np.ndarray:
        """-symbol on the rfft modes, with the 2/3-rule cut applied if dealiasing."""
        values = -symbol(wavenumbers(self.grid_size, self.torus_length), self.gamma)
        if self.dealias:
            values[np.arange(values.size) > self.grid_size // 3] = 0.0
        return values


def exact_linear_solution(
    g: ProfileSpec, gamma: float, t: float, grid_size: int, torus_length: float = 2.0
) -> DensityField:
    """rho_hat(t, k) = exp(-symbol(k) t) g_hat(k) for the linear equation."""
    initial = g.density(grid_positions(grid_size, torus_length))
    decay = np.exp(-symbol(wavenumbers(grid_size, torus_length), gamma) * t)
    values = np.fft.irfft(np.fft.rfft(initial) * decay, n=grid_size)
    return DensityField(values, float(t), torus_length)


class _Stepper:
    def __init__(self, cfg: SolverConfig):
        self.cfg = cfg
        self.multiplier = cfg.multiplier
        self.clipped = 0

    def rhs(self, rho: np.ndarray) -> np.ndarray:
        powered = rho if self.cfg.m == 1 else rho ** self.cfg.m
        return np.fft.irfft(np.fft.rfft(powered) * self.multiplier, n=rho.size)

    def step(self, rho: np.ndarray, h: float) -> np.ndarray:
        k1 = self.rhs(rho)
        k2 = self.rhs(rho + 0.5 * h * k1)
        k3 = self.rhs(rho + 0.5 * h * k2)
        k4 = self.rhs(rho + h * k3)
        return rho + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0

    def guard(self, rho: np.ndarray, time: float) -> np.ndarray:
        sup = float(np.max(np.abs(rho)))
        if not np.isfinite(sup) or sup > INSTABILITY_BOUND:
            raise SolverInstabilityError(time, sup)

        low = rho < -CLIP_TOLERANCE
        if np.any(low):
            self.clipped += int(np.count_nonzero(low))
            logger.warning(
                "t=%.6g: clipping %d undershoots (min %.3e)",
                time,
                int(np.count_nonzero(low)),
                float(rho.min()),
            )
            rho = np.where(low, 0.0, rho)
        return rho


def solve_fpme(g: ProfileSpec, cfg: SolverConfig, t_out: Sequence[float]) -> List[DensityField]:
    """
    Density fields at the requested times. Each interval between output
    times is split into equal steps no longer than cfg.dt, so output times
    are hit exactly.
    """
    times = [float(t) for t in t_out]
    if any(t < 0 for t in times) or times != sorted(times):
        raise InvalidArgumentError("output times must be nonnegative and ascending")

    g.check_torus(cfg.torus_length)

    if cfg.integrator == "exact_linear":
        return [exact_linear_solution(g, cfg.gamma, t, cfg.grid_size, cfg.torus_length) for t in times]

    logger.info(
        "solve fpme gamma=%g m=%d grid=%d dt=%.3e up to t=%g",
        cfg.gamma,
        cfg.m,
        cfg.grid_size,
        cfg.dt,
        times[-1] if times else 0.0,
    )

    stepper = _Stepper(cfg)
    rho = sample_profile(g, cfg.grid_size, cfg.torus_length).values
    now = 0.0
    fields = []

    for target in times:
        span = target - now
        if span > 0:
            steps = max(1, math.ceil(span / cfg.dt - 1e-9))
            h = span / steps
            for i in range(steps):
                rho = stepper.guard(stepper.step(rho, h), now + (i + 1) * h)
            now = target
        fields.append(DensityField(rho.copy(), target, cfg.torus_length))

    if stepper.clipped:
        logger.warning("clipped %d undershooting values in total", stepper.clipped)

    return fields
