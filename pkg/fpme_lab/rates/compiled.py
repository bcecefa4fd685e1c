"""
Compiled twins of the rate evaluators, reading bit-packed configurations
(uint64 words, site x at bit x % 64 of word x // 64). They back the Monte
Carlo inner loop and must agree with RateModel.c_m everywhere.
"""

import numpy as np
from numba import njit

__all__ = [
    "occupied",
    "flip",
    "c_dif_packed",
    "rate_factor_packed",
]


@njit(cache=True)
def occupied(words, size, site, x, y, swapped):
    s = site % size
    if swapped:
        if s == x:
            s = y
        elif s == y:
            s = x
    return np.int64((words[s >> 6] >> np.uint64(s & 63)) & np.uint64(1))


@njit(cache=True)
def flip(words, site):
    words[site >> 6] ^= np.uint64(1) << np.uint64(site & 63)


@njit(cache=True)
def c_dif_packed(words, size, m, a, b, x, y, swapped):
    total = 0
    for k in range(1, m + 1):
        term = 1
        for i in range(1, m - k + 1):
            if occupied(words, size, a - i, x, y, swapped) == 0:
                term = 0
                break
        if term:
            for i in range(1, k):
                if occupied(words, size, b + i, x, y, swapped) == 0:
                    term = 0
                    break
        total += term
    return total


@njit(cache=True)
def rate_factor_packed(words, size, m, x, y):
    if m == 1:
        return 2

    plain = c_dif_packed(words, size, m, x, y, x, y, False) + c_dif_packed(
        words, size, m, y, x, x, y, False
    )
    exchanged = c_dif_packed(words, size, m, x, y, x, y, True) + c_dif_packed(
        words, size, m, y, x, x, y, True
    )
    rate = max(plain, exchanged)

    if m >= 3:
        d = (y - x) % size
        if d == 1 or d == size - 1:
            rate += 1

    return rate
