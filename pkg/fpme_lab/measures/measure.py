import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import rel_entr

from fpme_lab.errors import CapacityError, DomainError, InvalidArgumentError
from fpme_lab.fracops import TestFunction, ring_positions
from fpme_lab.lattice import LatticeConfig, all_configurations
from fpme_lab.measures.profiles import ProfileSpec, profile_integral
from fpme_lab.utils import field_required

__all__ = [
    "MeasureSpec",
    "AssociationResult",
    "sample_initial",
    "relative_entropy",
    "relative_entropy_direct",
    "association_check",
]

logger = logging.getLogger(__name__)

ENTROPY_CLAMP = 1e-9
MIN_ASSOCIATION_SAMPLES = 100


@dataclass(frozen=True)
class MeasureSpec:
    """
    Product measure with site marginals Bernoulli(g(x / n)).

    MeasureSpec(profile=profile, n=n)
    """

    profile: ProfileSpec = field(default_factory=field_required)
    n: int = field(default_factory=field_required)
    torus_length: float = 2.0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError(f"n must be positive, got {self.n}")
        self.profile.check_torus(self.torus_length)

    @property
    def ring_size(self) -> int:
        return int(round(self.n * self.torus_length))

    @property
    def marginals(self) -> np.ndarray:
        return self.profile.density(ring_positions(self.ring_size, self.n))


def sample_initial(ms: MeasureSpec, rng: np.random.Generator) -> LatticeConfig:
    return LatticeConfig.from_array((rng.random(ms.ring_size) < ms.marginals).astype(np.uint8))


def _check_background(b: float) -> None:
    if not 0.0 < b < 1.0:
        raise DomainError(f"b must lie in (0, 1), got {b}")


def relative_entropy(ms: MeasureSpec, b: float) -> float:
    """H(mu_n | nu_b) = sum_x g_x log(g_x / b) + (1 - g_x) log((1 - g_x) / (1 - b))."""
    _check_background(b)
    g = np.clip(ms.marginals, ENTROPY_CLAMP, 1.0 - ENTROPY_CLAMP)
    return float(np.sum(rel_entr(g, b) + rel_entr(1.0 - g, 1.0 - b)))


def relative_entropy_direct(ms: MeasureSpec, b: float, cap: int = 14) -> float:
    """The same entropy summed over every configuration, for small rings."""
    _check_background(b)
    if ms.ring_size > cap:
        raise CapacityError(f"direct entropy is capped at {cap} sites, got {ms.ring_size}")

    g = np.clip(ms.marginals, ENTROPY_CLAMP, 1.0 - ENTROPY_CLAMP)
    eta = all_configurations(ms.ring_size).astype(bool)

    mu = np.prod(np.where(eta, g, 1.0 - g), axis=1)
    nu = np.prod(np.where(eta, b, 1.0 - b), axis=1)
    return float(np.sum(rel_entr(mu, nu)))


@dataclass(frozen=True)
class AssociationResult:
    exceedances: int
    samples: int
    delta: float
    target: float

    @property
    def fraction(self) -> float:
        return self.exceedances / self.samples


def association_check(
    samples: Sequence[LatticeConfig],
    profile: ProfileSpec,
    G: TestFunction,
    delta: float,
    n: int,
    torus_length: float = 2.0,
) -> AssociationResult:
    """
    Fraction of samples with |<pi^n, G> - int G g du| > delta.
    """
    if len(samples) < MIN_ASSOCIATION_SAMPLES:
        raise InvalidArgumentError(
            f"association needs at least {MIN_ASSOCIATION_SAMPLES} samples, got {len(samples)}"
        )

    target = profile_integral(G.spatial, profile, torus_length) * float(G.time_factor(0.0))
    weights = G.value(0.0, ring_positions(samples[0].size, n))
    pairings = np.array([np.dot(weights, cfg.to_array()) / n for cfg in samples])

    exceedances = int(np.count_nonzero(np.abs(pairings - target) > delta))
    logger.debug("association n=%d delta=%g: %d / %d", n, delta, exceedances, len(samples))
    return AssociationResult(exceedances, len(samples), delta, target)
