import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from more_properties import cached_property
from numpy.polynomial import hermite_e, polynomial
from scipy.special import gamma as gamma_fn
from scipy.special import hyp1f1

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.kernel import check_gamma, delta_gamma, symbol_constant

__all__ = ["FAMILIES", "TestFunction", "FracParams", "chebyshev_times"]

FAMILIES = ("gaussian_bump", "cosine_mode", "hermite_bump")

TIME_GRID_POINTS = 17


def chebyshev_times(T: float, count: int = TIME_GRID_POINTS) -> np.ndarray:
    """Chebyshev-Lobatto points on [0, T], endpoints included."""
    return 0.5 * T * (1.0 - np.cos(np.pi * np.arange(count) / (count - 1)))


@dataclass(frozen=True)
class FracParams:
    gamma: float

    def __post_init__(self):
        check_gamma(self.gamma)

    @property
    def delta_gamma(self) -> float:
        return delta_gamma(self.gamma)

    @property
    def kappa(self) -> float:
        return symbol_constant(self.gamma)


@dataclass(frozen=True)
class TestFunction:
    """
    Test function G(t, u) = P(t) phi(u), P a polynomial in time.

    TestFunction(family, center=center, width=width, k=k, order=order,
                 amplitude=amplitude, time_coefficients=(c0, c1, ...))

    Families:
      gaussian_bump   phi(u) = A exp(-v^2 / 2),           v = (u - center) / width
      hermite_bump    phi(u) = A He_order(v) exp(-v^2 / 2)
      cosine_mode     phi(u) = A cos(k u)   (k = 0 gives the constant A)
    """

    __test__ = False

    family: str = "gaussian_bump"
    center: float = 1.0
    width: float = 0.1
    k: float = 0.0
    order: int = 0
    amplitude: float = 1.0
    time_coefficients: Tuple[float, ...] = (1.0,)
    name: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(f"unknown test function family '{self.family}'")
        if self.width <= 0:
            raise InvalidArgumentError(f"width must be positive, got {self.width}")
        if self.order < 0 or int(self.order) != self.order:
            raise InvalidArgumentError(f"order must be a nonnegative integer, got {self.order}")
        object.__setattr__(
            self, "time_coefficients", tuple(float(c) for c in self.time_coefficients)
        )

    @property
    def label(self) -> str:
        return self.name or self.family

    @property
    def is_constant(self) -> bool:
        return self.family == "cosine_mode" and self.k == 0.0

    @property
    def hermite_order(self) -> int:
        return self.order if self.family == "hermite_bump" else 0

    def spatial(self, u, derivative: int = 0):
        """phi or one of its derivatives at u."""
        u = np.asarray(u, dtype=float)

        if self.family == "cosine_mode":
            value = self.k ** derivative * np.cos(self.k * u + derivative * np.pi / 2)
        else:
            v = (u - self.center) / self.width
            coefficients = np.zeros(self.hermite_order + derivative + 1)
            coefficients[-1] = 1.0
            value = (
                (-1.0) ** derivative
                * hermite_e.hermeval(v, coefficients)
                * np.exp(-0.5 * v * v)
                / self.width ** derivative
            )

        return self.amplitude * value

    def time_factor(self, t):
        return polynomial.polyval(t, self.time_coefficients)

    def time_derivative(self, t):
        return polynomial.polyval(t, polynomial.polyder(self.time_coefficients))

    def value(self, t, u):
        return self.time_factor(t) * self.spatial(u)

    def time_partial(self, t, u):
        return self.time_derivative(t) * self.spatial(u)

    def sup_time_factor(self, T: float) -> float:
        """max |P| over the Chebyshev time grid on [0, T]."""
        return float(np.max(np.abs(self.time_factor(chebyshev_times(T)))))

    def scaled(self, factor: float) -> "TestFunction":
        return TestFunction(
            self.family,
            center=self.center,
            width=self.width,
            k=self.k,
            order=self.order,
            amplitude=self.amplitude * factor,
            time_coefficients=self.time_coefficients,
            name=self.name,
        )

    @cached_property
    def integral(self) -> float:
        """int_R phi for the bump families; None for cosine modes."""
        if self.family == "cosine_mode":
            return None
        # int He_r(v) exp(-v^2/2) dv vanishes for r >= 1.
        if self.hermite_order:
            return 0.0
        return self.amplitude * self.width * math.sqrt(2.0 * math.pi)

    def frac_laplacian_exact(self, u, gamma: float):
        """
        Closed form of c_gamma PV int [phi(v) - phi(u)] / |u - v|^(1+gamma) dv
        for cosine modes and gaussian bumps.
        """
        kappa = symbol_constant(gamma)

        if self.family == "cosine_mode":
            return -kappa * abs(self.k) ** gamma * self.spatial(u)

        if self.hermite_order:
            raise InvalidArgumentError("no closed form for hermite bumps of order >= 1")

        v = (np.asarray(u, dtype=float) - self.center) / self.width
        a = 0.5 * (1.0 + gamma)
        scale = self.width ** -gamma * 2.0 ** (0.5 * gamma) * gamma_fn(a) / math.sqrt(math.pi)
        return -kappa * self.amplitude * scale * hyp1f1(a, 0.5, -0.5 * v * v)
