"""Portable deterministic randomness for instance and path generation.

Generated instances are part of the on-disk contract, so they must be
reproducible from a single integer seed without depending on a platform
RNG.  Everything here is built on SplitMix64 (Steele, Lea & Flood; the
generator behind Java's SplittableRandom): 64-bit state, one addition and
three xor-multiply mixing steps per draw.  The exact draw sequence used by
each consumer is documented at the call site.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 stream over 64-bit state.

    next_u64: state += 0x9E3779B97F4A7C15 (mod 2**64); z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) *
    0x94D049BB133111EB; return z ^ (z >> 31).
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1): top 53 bits of next_u64 scaled by 2**-53."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def normal(self) -> float:
        """Standard normal via Box-Muller.

        Consumes two draws: u1 = ((next_u64 >> 11) + 1) * 2**-53 in (0, 1],
        u2 = random().  Returns sqrt(-2 ln u1) * cos(2 pi u2); the paired
        sine value is discarded so each call costs exactly two draws.
        """
        u1 = ((self.next_u64() >> 11) + 1) * 2.0**-53
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def below(self, n: int) -> int:
        """Integer in [0, n) as next_u64 % n (modulo bias < n / 2**64)."""
        return self.next_u64() % n

    def shuffle(self, xs) -> None:
        """In-place Fisher-Yates from the top: for i = len-1..1, j = below(i+1)."""
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]


def mix(*parts: int) -> int:
    """Fold integers into one 64-bit sub-seed.

    acc starts at 0; for each part, acc = SplitMix64(acc + part).next_u64().
    Used to derive per-(instance, variant, sample) seeds so that parallel
    and serial evaluation draw identical streams.
    """
    acc = 0
    for p in parts:
        acc = SplitMix64((acc + p) & MASK64).next_u64()
    return acc
