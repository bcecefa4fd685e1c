import logging

import numpy as np
from scipy import integrate

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.fracops.functions import TestFunction
from fpme_lab.kernel import JumpKernel, check_gamma, normalizer

__all__ = ["frac_laplacian", "Kn_apply", "Kn_profile", "ring_positions"]

logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-11
QUAD_LIMIT = 200

# Below this offset the second difference is replaced by its Taylor limit.
TAYLOR_RADIUS = 1e-5


def ring_positions(size: int, n: int) -> np.ndarray:
    """Macroscopic positions x / n of the ring sites."""
    return np.arange(size) / n


def _length_scale(G: TestFunction) -> float:
    if G.family == "cosine_mode":
        return 1.0 / abs(G.k) if G.k else 1.0
    return G.width


def frac_laplacian(G: TestFunction, u: float, gamma: float, s: float = 0.0, h: float = None) -> float:
    """
    c_gamma PV int [G_s(v) - G_s(u)] / |u - v|^(1+gamma) dv on the real line.

    The integral is folded onto w = |v - u| > 0. On (0, h) the second
    difference G(u+w) + G(u-w) - 2G(u) = O(w^2) is integrated against the
    algebraic weight w^(1-gamma); on (h, inf) the two values are integrated
    directly and the -2G(u) part is added in closed form.
    """
    gamma = check_gamma(gamma)
    if G.is_constant:
        return 0.0

    h = h or 0.25 * _length_scale(G)
    u = float(u)
    phi = G.spatial
    centre = float(phi(u))
    curvature = float(phi(u, 2))

    def reduced_second_difference(w):
        if w < TAYLOR_RADIUS:
            return curvature
        return (float(phi(u + w)) + float(phi(u - w)) - 2.0 * centre) / (w * w)

    near, near_err = integrate.quad(
        reduced_second_difference,
        0.0,
        h,
        weight="alg",
        wvar=(1.0 - gamma, 0.0),
        epsabs=QUAD_EPSABS,
        limit=QUAD_LIMIT,
    )

    if G.family == "cosine_mode":
        # phi(u+w) + phi(u-w) = 2 cos(k w) phi(u)
        far, far_err = integrate.quad(
            lambda w: 2.0 * centre * w ** (-1.0 - gamma),
            h,
            np.inf,
            weight="cos",
            wvar=abs(G.k),
            epsabs=QUAD_EPSABS,
            limit=QUAD_LIMIT,
        )
    else:
        offset = abs(u - G.center)
        reach = offset + 40.0 * G.width
        points = [p for p in (offset,) if h < p < reach]
        far, far_err = integrate.quad(
            lambda w: (float(phi(u + w)) + float(phi(u - w))) * w ** (-1.0 - gamma),
            h,
            reach,
            points=points or None,
            epsabs=QUAD_EPSABS,
            limit=QUAD_LIMIT,
        )

    tail = -2.0 * centre * h ** -gamma / gamma
    logger.debug("frac_laplacian u=%g gamma=%g: quad errors %.1e, %.1e", u, gamma, near_err, far_err)

    return float(G.time_factor(s)) * normalizer(gamma) * (near + far + tail)


def Kn_profile(G: TestFunction, s: float, n: int, kernel: JumpKernel) -> np.ndarray:
    """
    K_n G_s(x / n) = sum_y [G_s(y / n) - G_s(x / n)] p(y - x) for every site,
    folded kernel, one FFT convolution.
    """
    if G.is_constant:
        return np.zeros(kernel.ring_size)

    values = G.value(s, ring_positions(kernel.ring_size, n))
    return kernel.convolve(values) - values


def Kn_apply(G: TestFunction, s: float, x: int, n: int, kernel: JumpKernel) -> float:
    """K_n G_s(x / n) at one site, summed term by term."""
    size = kernel.ring_size
    if not 0 <= x < size:
        raise InvalidArgumentError(f"site {x} outside ring of {size} sites")

    values = G.value(s, ring_positions(size, n))
    offsets = (np.arange(size) - x) % size
    return float(np.sum((values - values[x]) * kernel.folded_pmf[offsets]))
