from typing import Iterable

import numpy as np

from fpme_lab.errors import InvalidArgumentError

__all__ = ["LatticeConfig", "all_configurations", "reduce_site"]

WORD_BITS = 64


def reduce_site(x: int, size: int) -> int:
    """Reduce a site index into [0, size)."""
    return x % size


def _words_for(size: int) -> int:
    return (size + WORD_BITS - 1) // WORD_BITS


class LatticeConfig:
    """
    Occupancy state of a periodic ring of `size` sites.

    LatticeConfig(size, bits)

    Occupancies are bit-packed, 64 sites per uint64 word, bit (x % 64) of word
    x // 64 holding site x. The particle count is cached; `exchange` is the
    only mutation and never changes it.
    """

    __slots__ = ("size", "bits", "count")

    def __init__(self, size: int, bits: np.ndarray = None):
        if size < 1:
            raise InvalidArgumentError(f"ring size must be positive, got {size}")

        self.size = size

        if bits is None:
            bits = np.zeros(_words_for(size), dtype=np.uint64)
        else:
            bits = np.ascontiguousarray(bits, dtype=np.uint64)
            if bits.shape != (_words_for(size),):
                raise InvalidArgumentError(
                    f"expected {_words_for(size)} words for size {size}, got {bits.shape}"
                )
            padding = _words_for(size) * WORD_BITS - size
            if padding and int(bits[-1]) >> (WORD_BITS - padding):
                raise InvalidArgumentError(f"bits set beyond the last site {size - 1}")

        self.bits = bits
        self.count = int(self.to_array().sum())

    @classmethod
    def empty(cls, size: int) -> "LatticeConfig":
        return cls(size)

    @classmethod
    def full(cls, size: int) -> "LatticeConfig":
        return cls.from_array(np.ones(size, dtype=np.uint8))

    @classmethod
    def from_sites(cls, size: int, sites: Iterable[int]) -> "LatticeConfig":
        occupancy = np.zeros(size, dtype=np.uint8)
        occupancy[[reduce_site(x, size) for x in sites]] = 1
        return cls.from_array(occupancy)

    @classmethod
    def from_array(cls, occupancy) -> "LatticeConfig":
        occupancy = np.asarray(occupancy)
        if occupancy.ndim != 1 or not np.isin(occupancy, (0, 1)).all():
            raise InvalidArgumentError("occupancy must be a 1-d array of zeros and ones")

        size = occupancy.size
        padded = np.zeros(_words_for(size) * WORD_BITS, dtype=np.uint8)
        padded[:size] = occupancy
        packed = np.packbits(padded, bitorder="little")

        return cls(size, packed.view("<u8").astype(np.uint64))

    @classmethod
    def from_index(cls, index: int, size: int) -> "LatticeConfig":
        """Configuration whose site x holds bit x of `index`."""
        return cls.from_array((index >> np.arange(size)) & 1)

    def to_array(self) -> np.ndarray:
        raw = self.bits.astype("<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.size]

    def to_index(self) -> int:
        return int(sum(1 << int(x) for x in np.flatnonzero(self.to_array())))

    def to_hex(self) -> str:
        """Raw-bit snapshot: little-endian words, lowest site first."""
        return self.bits.astype("<u8").tobytes().hex()

    @classmethod
    def from_hex(cls, text: str, size: int) -> "LatticeConfig":
        """Inverse of to_hex; padding bits above the last site must be clear."""
        try:
            words = np.frombuffer(bytes.fromhex(text), dtype="<u8")
        except ValueError as error:
            raise InvalidArgumentError(f"not a configuration snapshot: {error}") from error
        return cls(size, words.astype(np.uint64))

    def copy(self) -> "LatticeConfig":
        return LatticeConfig(self.size, self.bits.copy())

    def occupancy(self, x: int) -> int:
        x = reduce_site(x, self.size)
        return (int(self.bits[x // WORD_BITS]) >> (x % WORD_BITS)) & 1

    __getitem__ = occupancy

    def discrepancy(self, x: int, y: int) -> int:
        """xi_{x,y}: 1 iff the occupancies at x and y differ."""
        return self.occupancy(x) ^ self.occupancy(y)

    def _flip(self, x: int) -> None:
        self.bits[x // WORD_BITS] ^= np.uint64(1 << (x % WORD_BITS))

    def exchange(self, x: int, y: int) -> "LatticeConfig":
        """
        Swap the occupancies at x and y in place and return self.
        """
        x, y = reduce_site(x, self.size), reduce_site(y, self.size)
        if x == y:
            raise InvalidArgumentError(f"cannot exchange site {x} with itself")

        if self.occupancy(x) != self.occupancy(y):
            self._flip(x)
            self._flip(y)

        return self

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeConfig):
            return NotImplemented
        return self.size == other.size and np.array_equal(self.bits, other.bits)

    def __repr__(self) -> str:
        if self.size <= 64:
            return f"LatticeConfig({''.join(map(str, self.to_array()))})"
        return f"LatticeConfig(size={self.size}, count={self.count})"


def all_configurations(size: int) -> np.ndarray:
    """
    Every configuration of a ring of `size` sites as rows of a (2**size, size)
    uint8 array; row i holds the bits of i, site x at column x.
    """
    indices = np.arange(1 << size, dtype=np.int64)
    return ((indices[:, None] >> np.arange(size)) & 1).astype(np.uint8)
