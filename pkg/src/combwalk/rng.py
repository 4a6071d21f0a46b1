"""Counter-based, splittable random streams.

A stream is identified by ``(seed, stream_id)``, both unsigned 64-bit
integers, which together form the 128-bit Philox key. The draw sequence is
therefore a pure function of the pair and does not depend on platform,
thread count, or on how many other streams were opened before it.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class RngStream:
    """One independent stream of uniform draws.

    ``split(i)`` derives a child stream without consuming any draws from the
    parent, so replica ``r`` of a bank always sees the same numbers no matter
    which worker builds it.
    """

    __slots__ = ("seed", "stream_id", "_gen")

    def __init__(self, seed: int = 0, stream_id: int = 0):
        if not (0 <= seed <= MASK64 and 0 <= stream_id <= MASK64):
            raise ValueError("seed and stream_id must be unsigned 64-bit integers")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._gen = Generator(Philox(key=key))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id:#x})"

    def split(self, index: int) -> "RngStream":
        child = splitmix64(self.stream_id ^ splitmix64(int(index) & MASK64))
        return RngStream(self.seed, child)

    def uniform(self, size: int) -> np.ndarray:
        """``size`` doubles in [0, 1)."""
        return self._gen.random(size)

    def raw(self, size: int) -> np.ndarray:
        """``size`` raw 64-bit words, little-endian by construction."""
        return np.asarray(self._gen.bit_generator.random_raw(size), dtype="<u8")

    def signs(self, size: int) -> np.ndarray:
        """``size`` independent fair +-1 values (int8), one bit each."""
        words = self.raw((size + 63) // 64)
        bits = np.unpackbits(words.view(np.uint8), bitorder="little")[:size]
        return (2 * bits.astype(np.int8) - 1).astype(np.int8)
