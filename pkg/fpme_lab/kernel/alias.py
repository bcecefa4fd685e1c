from dataclasses import dataclass

import numpy as np

__all__ = ["AliasTable"]


@dataclass(frozen=True, eq=False)
class AliasTable:
    """
    Walker/Vose alias tables for O(1) draws from a finite distribution.

    AliasTable.build(pmf)

    Column i is chosen uniformly; it returns i with probability prob[i] and
    alias[i] otherwise.
    """

    prob: np.ndarray
    alias: np.ndarray

    @classmethod
    def build(cls, pmf) -> "AliasTable":
        pmf = np.asarray(pmf, dtype=float)
        size = pmf.size
        scaled = pmf * (size / pmf.sum())

        prob = np.ones(size)
        alias = np.arange(size, dtype=np.int64)

        small = [i for i in range(size) if scaled[i] < 1.0]
        large = [i for i in range(size) if scaled[i] >= 1.0]

        while small and large:
            lo = small.pop()
            hi = large.pop()

            prob[lo] = scaled[lo]
            alias[lo] = hi

            scaled[hi] -= 1.0 - scaled[lo]
            (small if scaled[hi] < 1.0 else large).append(hi)

        # Leftovers are within rounding of 1 and keep prob = 1.
        return cls(prob=prob, alias=alias)

    @property
    def size(self) -> int:
        return self.prob.size

    def reconstruct(self) -> np.ndarray:
        """The distribution encoded by the tables."""
        weights = self.prob / self.size
        np.add.at(weights, self.alias, (1.0 - self.prob) / self.size)
        return weights

    def lookup(self, column_u: np.ndarray, coin_u: np.ndarray) -> np.ndarray:
        """Map pairs of uniforms on [0, 1) to indices."""
        column = np.minimum((column_u * self.size).astype(np.int64), self.size - 1)
        return np.where(coin_u < self.prob[column], column, self.alias[column])

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return self.lookup(rng.random(count), rng.random(count))
