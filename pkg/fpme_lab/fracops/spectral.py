import numpy as np

from fpme_lab.kernel import check_gamma, symbol_constant

__all__ = ["wavenumbers", "symbol", "periodic_frac_laplacian"]


def wavenumbers(grid_size: int, torus_length: float) -> np.ndarray:
    """Angular wavenumbers 2 pi k / torus_length of the real FFT."""
    return 2.0 * np.pi * np.fft.rfftfreq(grid_size, d=torus_length / grid_size)


def symbol(xi: np.ndarray, gamma: float) -> np.ndarray:
    """
    Multiplier magnitude of the operator at angular wavenumber xi:
    kappa_gamma |xi|^gamma for gamma in (0, 2), and |xi|^2 for the classical
    Laplacian at gamma = 2.
    """
    xi = np.abs(xi)
    if gamma == 2.0:
        return xi ** 2
    check_gamma(gamma)
    return symbol_constant(gamma) * xi ** gamma


def periodic_frac_laplacian(values: np.ndarray, torus_length: float, gamma: float) -> np.ndarray:
    """Apply -(-Delta)^{gamma/2} spectrally to samples of a periodic function."""
    values = np.asarray(values, dtype=float)
    size = values.shape[-1]
    multiplier = -symbol(wavenumbers(size, torus_length), gamma)
    return np.fft.irfft(np.fft.rfft(values) * multiplier, n=size)
