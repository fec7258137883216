import math
from fractions import Fraction

from bitarray import bitarray
import mmh3


class PointFilter:
    """
    A bloom filter over rational sample points.

    Points are compared by value: (1/2, 3) and (Fraction(2, 4), Fraction(3))
    are the same key. A negative answer is exact, a positive one may be a
    false positive at roughly the rate the filter was sized for.
    """

    def __init__(self, size, hash_count):
        if size < 1 or hash_count < 1:
            raise ValueError("a point filter needs at least one bit and one hash")
        self.size = size
        self.hash_count = hash_count
        self.bits = bitarray(size)
        self.bits.setall(0)
        self.added = 0

    @classmethod
    def for_capacity(cls, capacity, error_rate=1e-6):
        """Size the filter for `capacity` points at the given false-positive rate."""
        capacity = max(capacity, 1)
        size = math.ceil(-capacity * math.log(error_rate) / math.log(2) ** 2)
        hash_count = max(1, round(size / capacity * math.log(2)))
        return cls(size, hash_count)

    @staticmethod
    def _key(point) -> bytes:
        """Canonical bytes of a point, e.g. b"1/2,-3,0"."""
        return ','.join(str(Fraction(c)) for c in point).encode()

    def _positions(self, point):
        key = self._key(point)
        return [mmh3.hash(key, seed, signed=False) % self.size for seed in range(self.hash_count)]

    def add(self, point):
        for position in self._positions(point):
            self.bits[position] = 1
        self.added += 1

    def possibly_contains(self, point) -> bool:
        return all(self.bits[position] for position in self._positions(point))

    __contains__ = possibly_contains

    def __len__(self):
        return self.added
