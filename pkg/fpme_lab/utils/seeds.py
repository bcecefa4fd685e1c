import numpy as np

__all__ = ["splitmix64", "derive_seed", "make_rng"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """
    One splitmix64 output for the given 64-bit state (Steele, Lea, Flood 2014).
    """
    z = (state + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(master_seed: int, index: int) -> int:
    """
    Seed of trajectory `index` under `master_seed`.

    The seed is splitmix64 of master_seed + index * golden, so trajectory seeds
    depend only on (master_seed, index) and never on scheduling order.
    """
    return splitmix64((master_seed + index * _GOLDEN) & _MASK)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))
