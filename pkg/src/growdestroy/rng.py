"""Seedable random stream shared by the compiled and pure-Python kernels.

The generator is xoshiro256** seeded through splitmix64. Both algorithms are
small enough to be reproduced bit-for-bit in the Cython core, which is what
lets the two backends emit identical graphs for the same seed.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_INV_2_53 = 1.0 / 9007199254740992.0


def splitmix64(x: int) -> int:
    """One round of the splitmix64 finalizer applied to ``x + golden``."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, cell: int = 0, replica: int = 0) -> int:
    """Per-task seed used by sweeps.

    ``derive_seed(s, c, r) = splitmix64(splitmix64(splitmix64(s) ^ c) ^ r)``
    with every intermediate reduced mod 2**64.
    """
    h = splitmix64(master & MASK64)
    h = splitmix64(h ^ (cell & MASK64))
    return splitmix64(h ^ (replica & MASK64))


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class RngStream:
    """xoshiro256** stream.

    >>> a, b = RngStream(7), RngStream(7)
    >>> [a.random() for _ in range(3)] == [b.random() for _ in range(3)]
    True
    """

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int = 0):
        x = seed & MASK64
        state = []
        for _ in range(4):
            x = (x + 0x9E3779B97F4A7C15) & MASK64
            z = x
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
            state.append(z ^ (z >> 31))
        self.s0, self.s1, self.s2, self.s3 = state

    def getstate(self) -> tuple[int, int, int, int]:
        return (self.s0, self.s1, self.s2, self.s3)

    def setstate(self, state) -> None:
        self.s0, self.s1, self.s2, self.s3 = (int(v) & MASK64 for v in state)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n). Uses ``floor(random() * n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        i = int(self.random() * n)
        return i if i < n else n - 1

    def choice_weighted(self, weights) -> int:
        """Index drawn with probability proportional to ``weights``."""
        total = 0.0
        for w in weights:
            total += w
        if not total > 0.0:
            raise ValueError("weights must have a positive sum")
        target = self.random() * total
        acc = 0.0
        last = -1
        for i, w in enumerate(weights):
            if w > 0.0:
                acc += w
                last = i
                if acc > target:
                    return i
        return last
