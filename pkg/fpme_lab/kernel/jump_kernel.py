import logging
from dataclasses import dataclass

import numpy as np
from more_properties import cached_property
from scipy.special import zeta

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.kernel.alias import AliasTable
from fpme_lab.kernel.constants import check_gamma, normalizer, symbol_constant

__all__ = ["JumpKernel"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JumpKernel:
    """
    Long-jump law p(z) = c_gamma |z|^(-1-gamma), folded onto a ring.

    JumpKernel(gamma=gamma, ring_size=size)

    `folded_pmf[z]` is the probability of displacement z mod ring_size, the
    image sum of p over z + j * ring_size. Images of displacement 0 are
    dropped and the rest renormalised, so `folded_pmf[0] == 0` and the vector
    sums to one. The kernel is immutable; tables are built lazily once.
    """

    gamma: float
    ring_size: int

    def __post_init__(self):
        check_gamma(self.gamma)
        if self.ring_size < 3:
            raise InvalidArgumentError(f"ring_size must be >= 3, got {self.ring_size}")

    @cached_property
    def c_gamma(self) -> float:
        return normalizer(self.gamma)

    @cached_property
    def kappa(self) -> float:
        return symbol_constant(self.gamma)

    def pmf_infinite(self, z):
        """p(z) on the integers; 0 at z = 0."""
        z = np.abs(np.asarray(z, dtype=float))
        with np.errstate(divide="ignore"):
            values = np.where(z > 0, self.c_gamma * z ** (-1.0 - self.gamma), 0.0)
        return values if values.ndim else float(values)

    @cached_property
    def folded_pmf(self) -> np.ndarray:
        size = self.ring_size
        s = 1.0 + self.gamma
        q = np.arange(1, size) / size

        # sum_{j>=0} (z + j L)^-s = L^-s zeta(s, z/L), once per side of the ring.
        images = self.c_gamma * size ** -s * (zeta(s, q) + zeta(s, 1.0 - q))

        pmf = np.zeros(size)
        pmf[1:] = images / images.sum()

        logger.debug(
            "folded kernel gamma=%g size=%d: lost self-image mass %.3e",
            self.gamma,
            size,
            1.0 - images.sum(),
        )
        return pmf

    @cached_property
    def pmf_spectrum(self) -> np.ndarray:
        """Real FFT of folded_pmf, for circular convolutions."""
        return np.fft.rfft(self.folded_pmf)

    @cached_property
    def alias_table(self) -> AliasTable:
        return AliasTable.build(self.folded_pmf[1:])

    def sample_jump(self, rng: np.random.Generator) -> int:
        return int(self.sample_jumps(rng, 1)[0])

    def sample_jumps(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Displacements in {1, ..., ring_size - 1}, distributed per folded_pmf."""
        return self.alias_table.draw(rng, count) + 1

    def convolve(self, values: np.ndarray) -> np.ndarray:
        """(p * f)(x) = sum_y p(y - x) f(y) around the ring; p symmetric."""
        return np.fft.irfft(np.fft.rfft(values) * self.pmf_spectrum, n=self.ring_size)
