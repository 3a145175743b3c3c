"""Counter-based deterministic random source.

The engine needs reproducible sampling whose state is just (seed, counter),
so snapshots can serialize it and an identical replay is possible from any
point. SplitMix64 fits: output i is a pure function of seed and i.
"""

from __future__ import annotations

from dataclasses import dataclass

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


@dataclass
class RandomSource:
    """SplitMix64 stream addressed by (seed, counter)."""

    seed: int
    counter: int = 0

    def next_uint64(self) -> int:
        self.counter += 1
        return _mix((self.seed + self.counter * _GOLDEN) & _MASK64)

    def uniform(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_uint64() >> 11) * (2.0 ** -53)

    def state(self) -> tuple[int, int]:
        return (self.seed, self.counter)

    @classmethod
    def from_state(cls, state: tuple[int, int]) -> "RandomSource":
        return cls(seed=state[0], counter=state[1])
