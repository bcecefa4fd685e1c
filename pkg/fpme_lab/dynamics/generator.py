import logging
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np
from more_properties import cached_property
from scipy import sparse

from fpme_lab.errors import CapacityError, InvalidArgumentError
from fpme_lab.kernel import JumpKernel
from fpme_lab.lattice import all_configurations
from fpme_lab.rates import Occupancy, RateModel

__all__ = [
    "MAX_EXACT_SIZE",
    "GeneratorMatrix",
    "StationarityReport",
    "exact_generator",
    "bernoulli_vector",
    "ordered_pair_rates",
    "stationarity_check",
    "dirichlet_form",
    "dirichlet_pairing",
]

logger = logging.getLogger(__name__)

MAX_EXACT_SIZE = 14


def _check_capacity(size: int, cap: int = MAX_EXACT_SIZE) -> None:
    if size > cap:
        raise CapacityError(f"exact computations are capped at {cap} sites, got {size}")


def ordered_pair_rates(
    kernel: JumpKernel, model: RateModel
) -> Iterator[Tuple[int, int, int, np.ndarray]]:
    """
    Yield (x, z, y, rates) for every ordered pair y = x + z on the ring, where
    rates[i] = p(z) c_m(eta_i, x, y) xi_{x,y}(eta_i) / 4 over all configurations
    eta_i (index i, site x is bit x). Summing both orders of a bond gives the
    exchange rate p c_m / 2.
    """
    size = kernel.ring_size
    _check_capacity(size)
    occ = Occupancy(all_configurations(size))
    pmf = kernel.folded_pmf

    for x in range(size):
        for z in range(1, size):
            y = (x + z) % size
            xi = occ(x) != occ(y)
            yield x, z, y, 0.25 * pmf[z] * model.c_m(occ, x, y) * xi


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """
    Exact generator L of the exclusion process on a small ring, microscopic
    time scale. Row i, column j holds the rate of the move from configuration
    i to configuration j; rows sum to zero.
    """

    kernel: JumpKernel
    model: RateModel
    matrix: sparse.csr_matrix

    @property
    def size(self) -> int:
        return self.kernel.ring_size

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    @cached_property
    def particle_counts(self) -> np.ndarray:
        return all_configurations(self.size).sum(axis=1)

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()


def exact_generator(size: int, kernel: JumpKernel, model: RateModel) -> GeneratorMatrix:
    _check_capacity(size)
    if kernel.ring_size != size:
        raise InvalidArgumentError(f"kernel ring size {kernel.ring_size} != {size}")

    dimension = 1 << size
    indices = np.arange(dimension, dtype=np.int64)
    rows, cols, data = [], [], []

    for x, _, y, rates in ordered_pair_rates(kernel, model):
        moving = np.flatnonzero(rates)
        rows.append(indices[moving])
        cols.append(indices[moving] ^ ((1 << x) | (1 << y)))
        data.append(rates[moving])

    rows = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
    data = np.concatenate(data) if data else np.empty(0)

    off_diagonal = sparse.coo_matrix((data, (rows, cols)), shape=(dimension, dimension)).tocsr()
    exit_rates = np.asarray(off_diagonal.sum(axis=1)).ravel()
    matrix = (off_diagonal - sparse.diags(exit_rates)).tocsr()

    logger.info(
        "exact generator size=%d m=%d gamma=%g: %d nonzero rates",
        size,
        model.m,
        kernel.gamma,
        off_diagonal.nnz,
    )
    return GeneratorMatrix(kernel=kernel, model=model, matrix=matrix)


def bernoulli_vector(size: int, b: float) -> np.ndarray:
    """nu_b(eta_i) for every configuration index i."""
    if not 0.0 < b < 1.0:
        raise InvalidArgumentError(f"b must lie in (0, 1), got {b}")
    counts = all_configurations(size).sum(axis=1)
    return b ** counts * (1.0 - b) ** (size - counts)


@dataclass(frozen=True)
class StationarityReport:
    stationary_residual: float
    detailed_balance_residual: float

    def passed(self, stationary_tol: float = 1e-12, balance_tol: float = 1e-13) -> bool:
        return (
            self.stationary_residual < stationary_tol
            and self.detailed_balance_residual < balance_tol
        )


def stationarity_check(gen: GeneratorMatrix, b: float) -> StationarityReport:
    """
    ||nu_b^T L||_inf and max |nu(i) L[i, j] - nu(j) L[j, i]| over all entries.
    """
    nu = bernoulli_vector(gen.size, b)
    residual = float(np.max(np.abs(gen.matrix.T @ nu)))

    flux = sparse.diags(nu) @ gen.matrix
    imbalance = abs(flux - flux.T)
    balance = float(imbalance.max()) if imbalance.nnz else 0.0

    logger.debug("stationarity b=%g: %.3e, detailed balance %.3e", b, residual, balance)
    return StationarityReport(residual, balance)


def _check_density(f: np.ndarray, nu: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != nu.shape:
        raise InvalidArgumentError(f"density must have {nu.size} entries, got {f.shape}")
    if np.any(f < 0) or abs(float(f @ nu) - 1.0) > 1e-9:
        raise InvalidArgumentError("f must be a nonnegative density with respect to nu_b")
    return f


def dirichlet_form(gen: GeneratorMatrix, f: np.ndarray, b: float) -> float:
    """
    D(sqrt f, nu_b) = (1/4) sum_{x,y} p(y-x) int c_m [sqrt f(eta^{x,y}) - sqrt f(eta)]^2 dnu_b,
    summed pair by pair from the rates (independently of gen.matrix).
    """
    nu = bernoulli_vector(gen.size, b)
    root = np.sqrt(_check_density(f, nu))
    indices = np.arange(nu.size, dtype=np.int64)
    total = 0.0

    for x, _, y, rates in ordered_pair_rates(gen.kernel, gen.model):
        jumped = indices ^ ((1 << x) | (1 << y))
        total += float(np.sum(nu * rates * (root[jumped] - root) ** 2))

    return total


def dirichlet_pairing(gen: GeneratorMatrix, f: np.ndarray, b: float) -> float:
    """<L sqrt f, sqrt f>_{nu_b} through the generator matrix."""
    nu = bernoulli_vector(gen.size, b)
    root = np.sqrt(_check_density(f, nu))
    return float(np.sum(nu * root * (gen.matrix @ root)))
