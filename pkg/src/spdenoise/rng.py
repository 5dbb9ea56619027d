"""Portable seeded pseudorandom generator.

The generator is xoshiro256** (Blackman & Vigna) with its 256-bit state
filled from four consecutive SplitMix64 outputs of the user seed.  Both
algorithms are specified on unsigned 64-bit integers, so the stream is the
same on every platform and Python version.  numpy's generators are not used
here because their streams are not guaranteed stable across releases.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a SplitMix64 state; return ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class Rng:
    """xoshiro256** seeded through SplitMix64.

    Single-owner and mutable. Use :meth:`split` to hand independent streams
    to parallel workers.
    """

    __slots__ = ("_s",)

    def __init__(self, seed: int = 0):
        sm = seed & MASK64
        s = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            s.append(out)
        self._s = s

    @classmethod
    def from_state(cls, state: list[int]) -> "Rng":
        if len(state) != 4 or not any(state):
            raise ValueError("xoshiro256** state must be four words, not all zero")
        rng = cls.__new__(cls)
        rng._s = [w & MASK64 for w in state]
        return rng

    @property
    def state(self) -> tuple[int, int, int, int]:
        return tuple(self._s)

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform_below(self, n: int) -> int:
        """Unbiased integer in ``[0, n)`` by rejection sampling."""
        if n <= 0:
            raise ValueError(f"bound must be positive, got {n}")
        threshold = (1 << 64) % n
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % n

    def random(self) -> float:
        """Uniform float in ``[0, 1)`` with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def split(self) -> "Rng":
        return Rng(self.next_u64())

    def sample_without_replacement(self, population: int, k: int) -> list[int]:
        """First ``k`` entries of a partial Fisher-Yates shuffle of ``range(population)``."""
        if not 0 <= k <= population:
            raise ValueError(f"cannot draw {k} items from {population}")
        perm = list(range(population))
        for i in range(k):
            j = i + self.uniform_below(population - i)
            perm[i], perm[j] = perm[j], perm[i]
        return perm[:k]


def rng_new(seed: int) -> Rng:
    return Rng(seed)
