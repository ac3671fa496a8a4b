"""
Deterministic pseudo-random generator for every seeded draw in the toolkit.

A 64-bit linear congruential generator with Knuth's MMIX constants::

    state[n+1] = (6364136223846793005 * state[n] + 1442695040888963407) mod 2**64

The initial state is ``seed mod 2**64`` advanced once. ``random()`` takes the
top 53 bits of the next state as a float in [0, 1); ``randbelow(n)`` is
``floor(random() * n)``. ``shuffle`` is a Fisher-Yates pass from the last
position down, swapping ``i`` with ``randbelow(i + 1)``. Any implementation
following these three rules reproduces splits and k-means seeds bit for bit.
"""
from typing import List, MutableSequence, Sequence, TypeVar

T = TypeVar("T")

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK64 = (1 << 64) - 1


class LcgRandom:
    """Seeded 64-bit LCG."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64
        self._advance()

    def _advance(self) -> int:
        self.state = (MULTIPLIER * self.state + INCREMENT) & MASK64
        return self.state

    def random(self) -> float:
        return (self._advance() >> 11) / float(1 << 53)

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randbelow() needs a positive bound")
        return min(int(self.random() * n), n - 1)

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> List[int]:
        order = list(range(n))
        self.shuffle(order)
        return order

    def sample(self, population: Sequence[T], k: int) -> List[T]:
        """Draw ``k`` items without replacement (first ``k`` of a shuffle)."""
        if k > len(population):
            raise ValueError("sample larger than population")
        order = self.permutation(len(population))
        return [population[i] for i in order[:k]]
