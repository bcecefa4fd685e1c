import numpy as np

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.lattice import LatticeConfig

__all__ = ["Occupancy"]


class Occupancy:
    """
    Vectorised read access to one or many configurations.

    Occupancy(eta)

    `eta` is a LatticeConfig, a 1-d occupancy array, or a 2-d array with one
    configuration per row. Calling the accessor with a site (or an array of
    sites) returns eta[..., site mod size] as int64, so every rate formula
    evaluates unchanged on a single pair, on an array of pairs, or on all
    configurations at once.

    `swapped(x, y)` reads the configuration eta^{x,y} without copying.
    """

    __slots__ = ("eta", "size", "swap")

    def __init__(self, eta, swap=None):
        if isinstance(eta, Occupancy):
            swap = eta.swap if swap is None else swap
            eta = eta.eta
        elif isinstance(eta, LatticeConfig):
            eta = eta.to_array()

        self.eta = np.asarray(eta).astype(np.int64, copy=False)
        self.size = self.eta.shape[-1]
        self.swap = swap

    def __call__(self, site):
        site = np.mod(site, self.size)
        value = self.eta[..., site]

        if self.swap is not None:
            x, y = self.swap
            value = np.where(
                site == x,
                self.eta[..., y],
                np.where(site == y, self.eta[..., x], value),
            )

        return value

    def swapped(self, x, y) -> "Occupancy":
        pair = (np.mod(x, self.size), np.mod(y, self.size))

        if self.swap is None:
            return Occupancy(self.eta, swap=pair)

        # Exchanging the same pair twice restores eta.
        a, b = self.swap
        if np.array_equal(np.minimum(*pair), np.minimum(a, b)) and np.array_equal(
            np.maximum(*pair), np.maximum(a, b)
        ):
            return Occupancy(self.eta)

        raise InvalidArgumentError("only one pending exchange is supported")

    def ring_distance(self, x, y):
        d = np.mod(np.asarray(y) - np.asarray(x), self.size)
        return np.minimum(d, self.size - d)
