"""R^d with the Euclidean or sup norm and Lebesgue measure.

Lebesgue measure pushed forward by ``y -> d(x, y)`` is absolutely continuous
for either norm, so every space built here satisfies the full-dimensionality
condition the density identities need. Nothing is checked at runtime.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


class Norm(str, enum.Enum):
    L2 = "l2"
    LINF = "linf"


@dataclass(frozen=True)
class Space:
    """``dimension``-dimensional Euclidean space with the chosen norm."""

    dimension: int
    norm: Norm = Norm.L2

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension!r}")
        object.__setattr__(self, "dimension", int(self.dimension))
        object.__setattr__(self, "norm", Norm(self.norm))

    @property
    def d(self) -> int:
        return self.dimension

    def norm_of(self, x):
        """Norm along the last axis of ``x``."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            raise DimensionMismatch(
                f"expected points of length {self.dimension}, got shape {x.shape}")
        if self.norm is Norm.L2:
            return np.sqrt(np.sum(x * x, axis=-1))
        return np.max(np.abs(x), axis=-1)

    def distance(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape[-1] != self.dimension or y.shape[-1] != self.dimension:
            raise DimensionMismatch(
                f"expected points of length {self.dimension}, got {x.shape} and {y.shape}")
        out = self.norm_of(x - y)
        return float(out) if np.ndim(out) == 0 else out

    def unit_ball_volume(self) -> float:
        d = self.dimension
        if self.norm is Norm.L2:
            return math.pi ** (d / 2) / math.gamma(d / 2 + 1)
        return 2.0 ** d

    def ball_volume(self, radius: float) -> float:
        if radius < 0:
            raise ValueError("radius must be non-negative")
        return self.unit_ball_volume() * radius ** self.dimension

    def sphere_area(self, radius):
        """Surface measure of the sphere of the given radius (d/dr of ball volume)."""
        d = self.dimension
        return d * self.unit_ball_volume() * np.asarray(radius, dtype=float) ** (d - 1)

    def sample_direction(self, rng, size: int):
        """Points on the unit sphere of the norm, uniform w.r.t. its surface measure."""
        d = self.dimension
        if self.norm is Norm.L2:
            g = rng.standard_normal((size, d))
            return g / np.linalg.norm(g, axis=1, keepdims=True)
        # uniform on the cube shell: pick a face, then a uniform point on it
        out = rng.uniform(-1.0, 1.0, (size, d))
        face = rng.integers(0, 2 * d, size)
        rows = np.arange(size)
        out[rows, face // 2] = np.where(face % 2 == 0, 1.0, -1.0)
        return out

    def sample_uniform_ball(self, rng, radius: float, center=None, size: int = 1):
        """``size`` uniform points in the ball of ``radius`` about ``center``."""
        if radius <= 0:
            raise ValueError("radius must be positive")
        d = self.dimension
        if self.norm is Norm.L2:
            u = rng.random(size)
            pts = self.sample_direction(rng, size) * (radius * u ** (1.0 / d))[:, None]
        else:
            pts = rng.uniform(-radius, radius, (size, d))
        if center is not None:
            center = np.asarray(center, dtype=float)
            if center.shape != (d,):
                raise DimensionMismatch(f"center must have length {d}")
            pts = pts + center
        return pts
