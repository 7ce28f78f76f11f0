"""Portable 64-bit generator used by every randomized routine.

SplitMix64 (Steele, Lea & Flood).  All arithmetic is modulo 2**64::

    next():  state += 0x9E3779B97F4A7C15;  return mix64(state)
    mix64(z): z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
              z = (z ^ (z >> 27)) * 0x94D049BB133111EB
              return z ^ (z >> 31)

Seeding: the state is the seed reduced mod 2**64.  Bounded draws in [0, m)
use rejection: discard outputs below 2**64 mod m, return ``x % m``.
Monte Carlo shard ``i`` runs its own SplitMix64 seeded with output ``i + 1``
of SplitMix64(seed), i.e. ``mix64(seed + (i + 1) * GOLDEN)``.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def shard_seed(seed: int, shard: int) -> int:
    return mix64((seed + (shard + 1) * GOLDEN) & MASK64)


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) % m
        while True:
            x = self.next()
            if x >= threshold:
                return x % m

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def random(self) -> float:
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
