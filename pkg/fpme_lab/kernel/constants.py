import math
from functools import lru_cache

import numpy as np
from scipy.special import gamma as gamma_fn

from fpme_lab.errors import DomainError

__all__ = [
    "check_gamma",
    "normalizer",
    "riesz_constant",
    "symbol_constant",
    "delta_gamma",
]

# Partial sums run to PARTIAL_TERMS - 1; Euler-Maclaurin handles the rest.
PARTIAL_TERMS = 4096


def check_gamma(gamma: float) -> float:
    if not 0.0 < gamma < 2.0:
        raise DomainError(f"gamma must lie in (0, 2), got {gamma}")
    return float(gamma)


def _zeta_tail(s: float, start: int) -> float:
    """
    sum_{z >= start} z**-s by Euler-Maclaurin through the B4 term.

    The first omitted term is of order start**(-s-5) / 30240.
    """
    n = float(start)
    return (
        n ** (1.0 - s) / (s - 1.0)
        + 0.5 * n ** -s
        + s * n ** (-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n ** (-s - 3.0) / 720.0
    )


@lru_cache(maxsize=None)
def normalizer(gamma: float) -> float:
    """
    c_gamma = 1 / (2 zeta(1 + gamma)), the constant making
    p(z) = c_gamma |z|^(-1-gamma) a probability on the nonzero integers.
    """
    gamma = check_gamma(gamma)
    s = 1.0 + gamma

    z = np.arange(PARTIAL_TERMS - 1, 0, -1, dtype=float)
    zeta = math.fsum(z ** -s) + _zeta_tail(s, PARTIAL_TERMS)

    return 1.0 / (2.0 * zeta)


def riesz_constant(gamma: float) -> float:
    """
    C_{1,gamma}: the constant for which C_{1,gamma} PV int [G(v)-G(u)]/|u-v|^(1+gamma) dv
    has Fourier symbol -|xi|^gamma.
    """
    gamma = check_gamma(gamma)
    return (
        gamma
        * 2.0 ** (gamma - 1.0)
        * gamma_fn((1.0 + gamma) / 2.0)
        / (math.sqrt(math.pi) * gamma_fn(1.0 - gamma / 2.0))
    )


def symbol_constant(gamma: float) -> float:
    """
    kappa_gamma = c_gamma / C_{1,gamma}.

    The kernel-normalised operator c_gamma PV int [G(v)-G(u)]/|u-v|^(1+gamma) dv
    acts on Fourier modes as -kappa_gamma |xi|^gamma.
    """
    return normalizer(gamma) / riesz_constant(gamma)


def delta_gamma(gamma: float) -> float:
    gamma = check_gamma(gamma)
    if gamma == 1.0:
        return 0.5
    return 1.0 if gamma > 1.0 else 0.0
