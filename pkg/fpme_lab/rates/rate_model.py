from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from more_properties import cached_property

from fpme_lab.errors import InvalidArgumentError
from fpme_lab.rates.occupancy import Occupancy

__all__ = ["RateModel"]


def _product(occ: Occupancy, sites) -> np.ndarray:
    value = 1
    for site in sites:
        value = value * occ(site)
    return value


@dataclass(frozen=True)
class RateModel:
    """
    Exchange-rate factors of the porous-medium exclusion process.

    RateModel(m=m)

    Every evaluator takes `eta` (anything Occupancy accepts) and sites, and is
    pure. Values are small integers computed in integer arithmetic.

    `c_m` is the rate factor used by the dynamics: twice the exchange rate of
    the bond {x, y} divided by p(y - x). It is invariant under exchanging x
    and y, so the Bernoulli product measures are reversible.
    """

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidArgumentError(f"m must be a positive integer, got {self.m}")

    def _require_windows(self) -> None:
        if self.m < 2:
            raise InvalidArgumentError("m = 1 has no occupancy windows")

    @property
    def max_rate(self) -> int:
        return 2 * self.m + 1

    @cached_property
    def window_offsets(self) -> Tuple[Tuple[str, int], ...]:
        """
        a_{j,x,y} for j = 1, ..., 4(m-1) as (anchor, offset) pairs, anchor
        being "x" or "y".
        """
        self._require_windows()
        m = self.m
        offsets: List[Tuple[str, int]] = []

        for j in range(1, 4 * (m - 1) + 1):
            if j <= m - 1:
                offsets.append(("x", -(m - j)))
            elif j <= 2 * (m - 1):
                offsets.append(("y", j - (m - 1)))
            elif j <= 3 * (m - 1):
                offsets.append(("y", -(3 * m - 2 - j)))
            else:
                offsets.append(("x", j - 3 * (m - 1)))

        return tuple(offsets)

    def window_sites(self, x, y, size: int = None) -> list:
        sites = [
            (x if anchor == "x" else y) + offset
            for anchor, offset in self.window_offsets
        ]
        if size is not None:
            sites = [np.mod(site, size) for site in sites]
        return sites

    def c_dif(self, eta, x, y):
        """
        c^(m,dif)_{x,y} = sum_{k=1}^m prod_{i=1}^{m-k} eta(x-i) prod_{i=1}^{k-1} eta(y+i).
        """
        self._require_windows()
        occ = Occupancy(eta)
        m = self.m

        return sum(
            _product(occ, [x - i for i in range(1, m - k + 1)])
            * _product(occ, [y + i for i in range(1, k)])
            for k in range(1, m + 1)
        )

    def c_dif_window(self, eta, x, y):
        """
        c^(m,dif)_{x,y} + c^(m,dif)_{y,x} as the count of fully occupied
        windows of m - 1 consecutive a-table entries, m windows per half.
        """
        self._require_windows()
        occ = Occupancy(eta)
        sites = self.window_sites(x, y)
        half = 2 * (self.m - 1)

        return sum(
            _product(occ, sites[j : j + self.m - 1])
            + _product(occ, sites[half + j : half + j + self.m - 1])
            for j in range(self.m)
        )

    def c_dif_nearest(self, eta, x):
        """
        c^(m,dif)_{x,x+1} in the nearest-neighbour product form
        sum_{k=1}^m prod_{j=k-m, j not in {0,1}}^{k} eta(x+j).
        """
        self._require_windows()
        occ = Occupancy(eta)
        m = self.m

        return sum(
            _product(occ, [x + j for j in range(k - m, k + 1) if j not in (0, 1)])
            for k in range(1, m + 1)
        )

    def c_literal(self, eta, x, y):
        """c^(m,dif)_{x,y} + c^(m,dif)_{y,x}, evaluated on eta as given."""
        return self.c_dif(eta, x, y) + self.c_dif(eta, y, x)

    def c_m(self, eta, x, y):
        """
        Rate factor c^(m)_{x,y}: 2 for m = 1, otherwise
        max(c_literal(eta, x, y), c_literal(eta^{x,y}, x, y)), plus 1 on
        nearest-neighbour bonds when m >= 3.

        c_literal alone is not invariant under eta -> eta^{x,y}, so the
        exchange would not be reversible; taking the max over both sides of
        the exchange restores c_m(eta) = c_m(eta^{x,y}). audit_symmetry checks
        this exhaustively, and it departs from c_literal only on pairs closer
        than m sites.
        """
        occ = Occupancy(eta)
        distance = occ.ring_distance(x, y)
        if np.any(distance == 0):
            raise InvalidArgumentError("c_m is undefined for x = y")

        if self.m == 1:
            return np.full(np.broadcast(occ(x), occ(y)).shape, 2, dtype=np.int64)[()]

        rate = np.maximum(
            self.c_literal(occ, x, y), self.c_literal(occ.swapped(x, y), x, y)
        )
        if self.m >= 3:
            rate = rate + (distance == 1)

        return rate

    def B_m(self, eta, z):
        """prod_{i<m} eta(z-i) + prod_{i<m} eta(z+i); 2 eta(z) when m = 1."""
        occ = Occupancy(eta)
        return _product(occ, [z - i for i in range(self.m)]) + _product(
            occ, [z + i for i in range(self.m)]
        )

    def C_m(self, eta, z, w):
        """sum_{k=1}^{m-1} prod_{j<k} eta(z+j) prod_{i=1}^{m-k} eta(w-i)."""
        self._require_windows()
        occ = Occupancy(eta)
        m = self.m

        return sum(
            _product(occ, [z + j for j in range(k)])
            * _product(occ, [w - i for i in range(1, m - k + 1)])
            for k in range(1, m)
        )

    def decomposition_sides(self, eta, x, y):
        """
        Both sides of
        [c_dif(x,y) + c_dif(y,x)] [eta(y) - eta(x)]
          = B_m(y) - B_m(x) + [C_m(y,x) - C_m(y+1,x+1)] - [C_m(x,y) - C_m(x+1,y+1)].
        """
        occ = Occupancy(eta)
        left = self.c_literal(occ, x, y) * (occ(y) - occ(x))
        right = (
            self.B_m(occ, y)
            - self.B_m(occ, x)
            + (self.C_m(occ, y, x) - self.C_m(occ, y + 1, x + 1))
            - (self.C_m(occ, x, y) - self.C_m(occ, x + 1, y + 1))
        )
        return left, right

    def check_decomposition(self, eta, x, y):
        """True where the decomposition identity holds exactly."""
        left, right = self.decomposition_sides(eta, x, y)
        return np.asarray(left == right)[()]

    def separable_factors(self, eta) -> List[Tuple[np.ndarray, np.ndarray]]:
        """
        Site profiles (left, right) with c_literal(x, y) = sum left[x] * right[y]
        for every pair, as arrays over the ring. For m = 1 the single pair
        reproduces the constant rate 2.
        """
        occ = Occupancy(eta)
        sites = np.arange(occ.size)
        ones = np.ones(occ.size, dtype=np.int64)

        if self.m == 1:
            return [(2 * ones, ones)]

        factors = []
        for k in range(1, self.m + 1):
            left = ones * _product(occ, [sites - i for i in range(1, self.m - k + 1)])
            right = ones * _product(occ, [sites + i for i in range(1, k)])
            factors.append((left, right))
            factors.append((right, left))

        return factors

    def C_factors(self, eta) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Site profiles (left, right) with C_m(z, w) = sum left[z] * right[w]."""
        occ = Occupancy(eta)
        sites = np.arange(occ.size)
        ones = np.ones(occ.size, dtype=np.int64)

        return [
            (
                ones * _product(occ, [sites + j for j in range(k)]),
                ones * _product(occ, [sites - i for i in range(1, self.m - k + 1)]),
            )
            for k in range(1, self.m)
        ]
