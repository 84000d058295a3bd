import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Vec2:
    """A point in the real plane (fading vectors, transmit symbols)."""

    c1: float
    c2: float

    def __post_init__(self):
        if not (math.isfinite(self.c1) and math.isfinite(self.c2)):
            raise ValueError(f"Vec2 components must be finite, got ({self.c1}, {self.c2})")

    @classmethod
    def from_array(cls, values):
        values = np.asarray(values, dtype=float).reshape(2)
        return cls(float(values[0]), float(values[1]))

    def dot(self, other):
        return self.c1 * other.c1 + self.c2 * other.c2

    def norm(self):
        return math.hypot(self.c1, self.c2)

    def __add__(self, other):
        return Vec2(self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other):
        return Vec2(self.c1 - other.c1, self.c2 - other.c2)

    def __mul__(self, scale):
        return Vec2(self.c1 * scale, self.c2 * scale)

    __rmul__ = __mul__
