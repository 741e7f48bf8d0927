"""Euclidean primitives shared by the whole library: points, balls, distances.

Every distance in the package is computed by one kernel (`dists_from`), so the
scalar and vectorized code paths agree bit-for-bit.  That exactness is what
makes replayed streams reproduce a sketch identically; do not add alternative
distance implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimensionMismatchError",
    "Point",
    "Ball",
    "dist",
    "in_expansion",
    "ball_support_dist",
    "coords_matrix",
    "dists_from",
]


class DimensionMismatchError(ValueError):
    """Points or balls of different dimensions were combined."""


@dataclass(frozen=True)
class Point:
    """Immutable point in R^d.  Coordinates are finite 64-bit floats."""

    coords: tuple[float, ...]

    def __init__(self, coords: Iterable[float]) -> None:
        vals = tuple(float(x) for x in coords)
        if not vals:
            raise ValueError("a point needs at least one coordinate")
        for x in vals:
            if not math.isfinite(x):
                raise ValueError(f"non-finite coordinate {x!r}")
        object.__setattr__(self, "coords", vals)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=np.float64)


@dataclass(frozen=True)
class Ball:
    """A center point plus a nonnegative radius."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        r = float(self.radius)
        if not math.isfinite(r) or r < 0.0:
            raise ValueError(f"radius must be finite and >= 0, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.dim


def _require_same_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"dimension mismatch: {a} vs {b}")


def coords_matrix(points: Sequence[Point]) -> np.ndarray:
    """Stack points into a C-contiguous (n, d) float64 matrix.

    All points must share a dimension.
    """
    if not points:
        raise ValueError("empty point sequence")
    d = points[0].dim
    for p in points[1:]:
        _require_same_dim(d, p.dim)
    return np.ascontiguousarray([p.coords for p in points], dtype=np.float64)


def dists_from(matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Euclidean distance from each row of `matrix` to the vector `x`.

    This is the library's single distance kernel.
    """
    diff = np.ascontiguousarray(matrix - x)
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def dist(p: Point, q: Point) -> float:
    """Euclidean distance between two points of equal dimension."""
    _require_same_dim(p.dim, q.dim)
    row = p.as_array().reshape(1, -1)
    return float(dists_from(row, q.as_array())[0])


def in_expansion(b: Ball, eps: float, p: Point) -> bool:
    """Whether `p` lies in the (1+eps)-expansion of `b` (boundary counts).

    Plain floating-point `<=`; no slack is added.
    """
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must be in (0, 1], got {eps!r}")
    _require_same_dim(b.dim, p.dim)
    return dist(p, b.center) <= (1.0 + eps) * b.radius


def ball_support_dist(x: Point, b: Ball) -> float:
    """Distance from `x` to the farthest point of ball `b`."""
    _require_same_dim(x.dim, b.dim)
    return dist(x, b.center) + b.radius
