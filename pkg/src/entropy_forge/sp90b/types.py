"""Core data containers for the assessment pipeline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from ..extraction import SymbolStream, to_bits


@dataclass(frozen=True)
class Dataset:
    """A sequence of n-bit symbols under assessment."""

    samples: np.ndarray
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise ParameterError(f"n must be in [1, 16], got {self.n}")
        dtype = np.uint8 if self.n <= 8 else np.uint16
        samples = np.ascontiguousarray(self.samples, dtype=dtype)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1:
            raise ParameterError("samples must be 1-D")
        if samples.size and int(samples.max()) >= (1 << self.n):
            raise ParameterError(f"sample values must be < 2**{self.n}")

    @classmethod
    def from_stream(cls, stream: SymbolStream) -> "Dataset":
        return cls(samples=stream.symbols, n=stream.n)

    @property
    def alphabet_size(self) -> int:
        return 1 << self.n

    def bits(self) -> np.ndarray:
        """MSB-first bit expansion of the symbols."""
        return to_bits(SymbolStream(n=self.n, symbols=self.samples.astype(np.uint16)))

    def bit_dataset(self) -> "Dataset":
        return Dataset(samples=self.bits(), n=1)

    def raw_bytes(self) -> bytes:
        """Little-endian byte serialization used by the compression statistic."""
        if self.n <= 8:
            return self.samples.tobytes()
        return self.samples.astype("<u2").tobytes()

    def __len__(self) -> int:
        return self.samples.size
