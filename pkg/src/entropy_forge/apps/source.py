"""Bit-stream consumer with unbiased bounded draws.

A RandomSource wraps a finite bit stream (from a symbol-stream file or
memory) behind a strictly sequential cursor.  Bounded draws use
rejection sampling on ceil(log2 m)-bit words, which is exactly uniform
for every m.  The stream is never recycled: running out raises.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError, SourceExhaustedError
from ..extraction import SymbolStream, read_stream, to_bits


class RandomSource:
    """Sequential cursor over a fixed supply of random bits."""

    def __init__(self, bits: np.ndarray):
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise ParameterError("bits must be a 1-D array of 0/1 values")
        if bits.size and int(bits.max()) > 1:
            raise ParameterError("bits must contain only 0 and 1")
        self._bits = bits
        self._cursor = 0

    @classmethod
    def from_bytes(cls, raw: bytes) -> "RandomSource":
        return cls(np.unpackbits(np.frombuffer(raw, dtype=np.uint8)))

    @classmethod
    def from_stream(cls, stream: SymbolStream) -> "RandomSource":
        return cls(to_bits(stream))

    @classmethod
    def from_file(cls, path) -> "RandomSource":
        return cls.from_stream(read_stream(path))

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def cursor(self) -> int:
        return self._cursor

    @property
    def bits_consumed(self) -> int:
        return self._cursor

    @property
    def bits_remaining(self) -> int:
        return self._bits.size - self._cursor

    def _advance(self, new_cursor: int) -> None:
        if new_cursor > self._bits.size:
            raise SourceExhaustedError(
                f"stream exhausted at bit {self._bits.size}"
            )
        self._cursor = new_cursor

    def take_word(self, width: int) -> int:
        """Read one MSB-first word of the given bit width."""
        if width < 1:
            raise ParameterError("width must be >= 1")
        end = self._cursor + width
        if end > self._bits.size:
            raise SourceExhaustedError(
                f"need {width} bits at position {self._cursor}, "
                f"only {self.bits_remaining} remain"
            )
        chunk = self._bits[self._cursor: end]
        self._cursor = end
        value = 0
        for b in chunk.tolist():
            value = (value << 1) | b
        return value

    def draw(self, m: int) -> int:
        """Uniform integer in [0, m) by rejection on ceil(log2 m)-bit words."""
        if m < 1:
            raise ParameterError(f"m must be >= 1, got {m}")
        if m == 1:
            return 0
        width = (m - 1).bit_length()
        while True:
            value = self.take_word(width)
            if value < m:
                return value

    def draw_batch(self, m: int, count: int) -> np.ndarray:
        """Vectorized draws; bit-for-bit equivalent to repeated draw()."""
        if m < 1:
            raise ParameterError(f"m must be >= 1, got {m}")
        if count < 0:
            raise ParameterError(f"count must be >= 0, got {count}")
        if m == 1:
            return np.zeros(count, dtype=np.int64)
        width = (m - 1).bit_length()
        weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
        accept_rate = m / (1 << width)
        out = np.empty(count, dtype=np.int64)
        filled = 0
        while filled < count:
            need = count - filled
            words_avail = (self._bits.size - self._cursor) // width
            if words_avail == 0:
                raise SourceExhaustedError(
                    f"stream exhausted after {filled} of {count} draws"
                )
            take = min(words_avail, int(need / accept_rate * 1.15) + 16)
            end = self._cursor + take * width
            values = (
                self._bits[self._cursor: end]
                .reshape(take, width)
                .astype(np.int64)
                @ weights
            )
            accepted = np.flatnonzero(values < m)
            if accepted.size >= need:
                # Stop at the word that produced the last needed draw so
                # the cursor matches the scalar path exactly.
                last_word = int(accepted[need - 1])
                out[filled:count] = values[accepted[:need]]
                self._cursor += (last_word + 1) * width
                filled = count
            else:
                out[filled: filled + accepted.size] = values[accepted]
                filled += accepted.size
                self._cursor = end
        return out


def draw_uniform(src: RandomSource, m: int) -> int:
    """Uniform integer in [0, m) consumed from the source."""
    return src.draw(m)
