"""M-PSK constellations with Gray bit mapping, unit symbol energy."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _gray(i: int) -> int:
    return i ^ (i >> 1)


@dataclass(frozen=True)
class Constellation:
    """Unit-energy M-PSK alphabet; point m is exp(i 2 pi m / M).

    For M = 2 this is BPSK {+1, -1}. ``gray_map[m]`` is the bit pattern of
    point m; adjacent points differ in exactly one bit.
    """

    order: int
    points: np.ndarray = field(compare=False)
    gray_map: np.ndarray = field(compare=False)  # (M, bits_per_symbol) of 0/1

    @classmethod
    def mpsk(cls, order: int) -> "Constellation":
        if order < 2 or order & (order - 1):
            raise ValueError("M-PSK order must be a power of two >= 2")
        m = np.arange(order)
        points = np.exp(2j * np.pi * m / order)
        if order == 2:
            points = points.real.astype(complex)  # exact {+1, -1}
        nbits = order.bit_length() - 1
        gray = np.array(
            [[(_gray(i) >> (nbits - 1 - b)) & 1 for b in range(nbits)] for i in m],
            dtype=np.int8,
        )
        return cls(order=order, points=points, gray_map=gray)

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    def modulate_bits(self, bits: np.ndarray) -> np.ndarray:
        """Map a bit stream (multiple of bits_per_symbol) to symbols."""
        bits = np.asarray(bits, dtype=np.int8).reshape(-1, self.bits_per_symbol)
        # invert the Gray map: bit pattern -> point index
        weights = 1 << np.arange(self.bits_per_symbol - 1, -1, -1)
        pattern = bits @ weights
        lut = np.empty(self.order, dtype=np.intp)
        lut[self.gray_map @ weights] = np.arange(self.order)
        return self.points[lut[pattern]]

    def index_of(self, symbols: np.ndarray) -> np.ndarray:
        """Nearest-point indices for (possibly noisy) symbol values."""
        symbols = np.asarray(symbols, dtype=complex)
        d2 = np.abs(symbols[..., None] - self.points) ** 2
        return np.argmin(d2, axis=-1)

    def hard_decision(self, symbols: np.ndarray) -> np.ndarray:
        return self.points[self.index_of(symbols)]

    def demodulate(self, symbols: np.ndarray) -> np.ndarray:
        """Hard-decision symbols to the Gray-mapped bit stream."""
        return self.gray_map[self.index_of(symbols)].reshape(-1)
