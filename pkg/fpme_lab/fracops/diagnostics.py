import logging
from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from fpme_lab.fracops.functions import TestFunction
from fpme_lab.fracops.operators import ring_positions
from fpme_lab.fracops.spectral import periodic_frac_laplacian
from fpme_lab.kernel import JumpKernel

__all__ = [
    "ExtraTermBounds",
    "L1Report",
    "convdisc_gap",
    "extra_term_bounds",
    "l1_boundedness",
    "discrete_gradient",
    "fit_slope",
]

logger = logging.getLogger(__name__)


def fit_slope(ns: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(value) against log(n)."""
    slope, _ = np.polyfit(np.log(np.asarray(ns, dtype=float)), np.log(np.asarray(values)), 1)
    return float(slope)


def discrete_gradient(values: np.ndarray, n: int) -> np.ndarray:
    """n [G(x / n) - G((x - 1) / n)] around the ring."""
    return n * (values - np.roll(values, 1))


def convdisc_gap(G: TestFunction, n: int, gamma: float, kernel: JumpKernel, T: float = 1.0) -> float:
    """
    (1/n) sum_x sup_s |n^gamma K_n G_s(x/n) - [-(-Delta)^{gamma/2} G_s](x/n)|
    against the periodic operator on the torus of length ring_size / n.
    """
    if G.is_constant:
        return 0.0

    size = kernel.ring_size
    phi = G.spatial(ring_positions(size, n))
    discrete = n ** gamma * (kernel.convolve(phi) - phi)
    continuum = periodic_frac_laplacian(phi, size / n, gamma)

    gap = G.sup_time_factor(T) * float(np.sum(np.abs(discrete - continuum))) / n
    logger.debug("convdisc gap n=%d gamma=%g: %.3e", n, gamma, gap)
    return gap


@dataclass(frozen=True)
class ExtraTermBounds:
    y1: float
    y2: float


def extra_term_bounds(
    G: TestFunction, n: int, gamma: float, kernel: JumpKernel, m: int, T: float = 1.0
) -> ExtraTermBounds:
    """
    Y1 = ((m-1)/n^2) sum_{x,y} sup_s n^gamma |grad G(y/n) - grad G(x/n)| p(y-x)
    Y2 = (1/n) sum_x sup_s n^gamma |G((x+1)/n) + G((x-1)/n) - 2 G(x/n)|
    """
    size = kernel.ring_size
    phi = G.spatial(ring_positions(size, n))
    sup_p = G.sup_time_factor(T)
    scale = n ** gamma * sup_p

    gradient = discrete_gradient(phi, n)
    pmf = kernel.folded_pmf

    # p(z) = p(size - z): offsets past the half ring repeat earlier ones.
    pairs = 0.0
    for z in range(1, size // 2 + 1):
        weight = pmf[z] if 2 * z == size else 2.0 * pmf[z]
        pairs += weight * float(np.sum(np.abs(np.roll(gradient, -z) - gradient)))

    y1 = (m - 1) * scale * pairs / n ** 2
    second = np.roll(phi, -1) + np.roll(phi, 1) - 2.0 * phi
    y2 = scale * float(np.sum(np.abs(second))) / n

    logger.debug("extra-term bounds n=%d gamma=%g m=%d: Y1=%.3e Y2=%.3e", n, gamma, m, y1, y2)
    return ExtraTermBounds(y1, y2)


@dataclass(frozen=True)
class L1Report:
    values: Dict[int, float]

    @property
    def maximum(self) -> float:
        return max(self.values.values(), default=0.0)

    @property
    def relative_spread(self) -> float:
        values = list(self.values.values())
        if not values or max(values) == 0.0:
            return 0.0
        return (max(values) - min(values)) / max(values)


def l1_boundedness(
    G: TestFunction, n_list: Sequence[int], gamma: float, torus_length: float = 2.0, T: float = 1.0
) -> L1Report:
    """(1/n) sum_x sup_s |[-(-Delta)^{gamma/2} G_s](x/n)| for each n."""
    sup_p = G.sup_time_factor(T)
    values = {}

    for n in n_list:
        size = int(round(n * torus_length))
        if G.is_constant:
            values[n] = 0.0
            continue
        phi = G.spatial(ring_positions(size, n))
        values[n] = sup_p * float(np.sum(np.abs(periodic_frac_laplacian(phi, size / n, gamma)))) / n

    return L1Report(values)
