"""Brute-force ground truth and baselines for checking approximation ratios.

Everything here is meant for test/bench scale (n up to a few thousand);
brute_fp is O(n^2 d).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import Ball, DimensionMismatchError, Point, coords_matrix, dists_from
from .meb import meb_points

__all__ = ["RatioReport", "brute_fn", "brute_fp", "reference_meb", "gonzalez_2meb"]

# Two orders below every acceptance tolerance, so oracle error never flips a
# verdict.
REFERENCE_DELTA = 1e-9


@dataclass(frozen=True)
class RatioReport:
    """A measured worst-case ratio against its guaranteed bound."""

    n: int
    d: int
    epsilon: float
    measured_max_ratio: float
    bound: float
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "passed", self.measured_max_ratio <= self.bound + 1e-9
        )


def brute_fn(points: Sequence[Point], x: Point) -> Point:
    """Exact farthest neighbor of `x`; ties go to the lowest index."""
    pts = list(points)
    if not pts:
        raise ValueError("brute_fn needs at least one point")
    if x.dim != pts[0].dim:
        raise DimensionMismatchError(f"dimension mismatch: {pts[0].dim} vs {x.dim}")
    dn = dists_from(coords_matrix(pts), x.as_array())
    return pts[int(np.argmax(dn))]


def brute_fp(points: Sequence[Point]) -> tuple[Point, Point]:
    """Exact farthest pair by full O(n^2) scan; ties go to the
    lexicographically smallest index pair."""
    pts = list(points)
    if len(pts) < 2:
        raise ValueError("brute_fp needs at least two points")
    P = coords_matrix(pts)
    best = -1.0
    best_pair = (0, 1)
    for i in range(len(pts) - 1):
        dn = dists_from(P[i + 1 :], P[i])
        j = int(np.argmax(dn))
        if dn[j] > best:
            best = float(dn[j])
            best_pair = (i, i + 1 + j)
    return pts[best_pair[0]], pts[best_pair[1]]


def reference_meb(points: Sequence[Point]) -> Ball:
    """Near-exact enclosing ball (delta = 1e-9); the "exact" radius in ratio
    tests."""
    return meb_points(points, REFERENCE_DELTA).ball


def gonzalez_2meb(points: Iterable[Point]) -> Ball:
    """2-approximate enclosing ball: the first point as center, radius the
    farthest distance seen.  Works in a single pass."""
    it = iter(points)
    try:
        first = next(it)
    except StopIteration:
        raise ValueError("gonzalez_2meb needs at least one point") from None
    center = first.as_array()
    radius = 0.0
    for p in it:
        if p.dim != first.dim:
            raise DimensionMismatchError(
                f"dimension mismatch: {first.dim} vs {p.dim}"
            )
        d = float(dists_from(p.as_array().reshape(1, -1), center)[0])
        if d > radius:
            radius = d
    return Ball(first, radius)
