import numpy as np
from scipy.signal import fftconvolve
from scipy.special import zeta

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.fracops.spectral import wavenumbers
from fpme_lab.kernel import check_gamma, riesz_constant

__all__ = ["sobolev_seminorm", "sobolev_seminorm_spectral"]


def _diagonal_cells(values: np.ndarray, step: float, gamma: float, periodic: bool) -> float:
    # Inside a cell [f(u) - f(v)]^2 ~ f'(u)^2 (u - v)^2, and
    # int_cell int_cell |u - v|^(1-gamma) = 2 h^(3-gamma) / ((2-gamma)(3-gamma)).
    if periodic:
        slope = (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * step)
    else:
        slope = np.gradient(values, step)
    cell = 2.0 * step ** (3.0 - gamma) / ((2.0 - gamma) * (3.0 - gamma))
    return cell * float(np.sum(slope ** 2))


def sobolev_seminorm(
    values: np.ndarray,
    gamma: float,
    torus_length: float,
    background: float = None,
    periodic: bool = False,
) -> float:
    """
    Gagliardo seminorm [f]^2 = int int [f(u) - f(v)]^2 / |u - v|^(1+gamma) du dv of
    grid samples f(i h), h = torus_length / len(values).

    periodic=False: f is a function on the real line equal to `background`
    outside the sampled window (default: the mean of the edge samples); the
    window-to-outside interaction is added analytically.

    periodic=True: u ranges over one period and v over the real line, so the
    kernel is replaced by its image sum (a Hurwitz zeta).

    Off-diagonal cells use the midpoint rule; diagonal cells use the
    first-order Taylor expansion of f.
    """
    gamma = check_gamma(gamma)
    values = np.asarray(values, dtype=float)
    size = values.size
    if size < 4:
        raise InvalidArgumentError("at least four grid points are required")

    step = torus_length / size
    s = 1.0 + gamma
    offsets = np.arange(1, size)

    if periodic:
        q = offsets / size
        images = size ** -s * (zeta(s, q) + zeta(s, 1.0 - q))
        kernel = np.concatenate(([0.0], images))
        spectrum = np.fft.rfft(kernel)
        smoothed = np.fft.irfft(np.fft.rfft(values) * spectrum, n=size)
        # sum_{i,j} (f_i - f_j)^2 K(i - j) = 2 sum f^2 sum K - 2 sum f (K * f)
        pairs = 2.0 * (float(np.sum(values ** 2)) * float(np.sum(kernel)) - float(np.dot(values, smoothed)))
        return step ** (1.0 - gamma) * pairs + _diagonal_cells(values, step, gamma, True)

    b = 0.5 * (values[0] + values[-1]) if background is None else float(background)
    distances = np.concatenate((offsets[::-1], [0], offsets)).astype(float)
    kernel = np.zeros_like(distances)
    kernel[distances > 0] = distances[distances > 0] ** -s

    coverage = fftconvolve(np.ones(size), kernel)[size - 1 : 2 * size - 1]
    smoothed = fftconvolve(values, kernel)[size - 1 : 2 * size - 1]
    pairs = 2.0 * (float(np.dot(values ** 2, coverage)) - float(np.dot(values, smoothed)))

    # Sample i sits at the centre of cell [(i - 1/2) h, (i + 1/2) h].
    left = (np.arange(size) + 0.5) * step
    right = torus_length - left
    outside = 2.0 * step * float(np.sum((values - b) ** 2 * (left ** -gamma + right ** -gamma))) / gamma

    return step ** (1.0 - gamma) * pairs + _diagonal_cells(values, step, gamma, False) + outside


def sobolev_seminorm_spectral(values: np.ndarray, gamma: float, torus_length: float) -> float:
    """
    Periodic seminorm from Fourier coefficients:
    (2 / C_{1,gamma}) * torus_length * sum_k |xi_k|^gamma |c_k|^2.
    """
    gamma = check_gamma(gamma)
    values = np.asarray(values, dtype=float)
    size = values.size

    coefficients = np.fft.rfft(values) / size
    weights = np.full(coefficients.size, 2.0)
    weights[0] = 1.0
    if size % 2 == 0:
        weights[-1] = 1.0

    xi = wavenumbers(size, torus_length)
    total = float(np.sum(weights * np.abs(xi) ** gamma * np.abs(coefficients) ** 2))
    return 2.0 * torus_length * total / riesz_constant(gamma)
