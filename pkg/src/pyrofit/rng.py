"""Deterministic 64-bit random generator (splitmix64).

The particle engine is re-implemented client-side, so the generator must be
trivially portable: splitmix64 needs only 64-bit integer ops and produces
identical draw sequences from the same seed in any language.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """Seeded u64 stream; `random()` maps draws to float64 in [0, 1)."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        # 53 high bits -> [0, 1); exact in IEEE float64.
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + self.random() * (hi - lo)


class SeedSource:
    """Splittable source of firework seeds, owned by one session."""

    def __init__(self, root_seed: int):
        self._rng = SplitMix64(root_seed)

    def next_seed(self) -> int:
        return self._rng.next_u64()
