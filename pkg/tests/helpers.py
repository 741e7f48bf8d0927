"""Shared test utilities: point conversion and seeded stream generators."""

from __future__ import annotations

import numpy as np

from ballcover import Point


def to_points(arr) -> list[Point]:
    return [Point(row) for row in np.asarray(arr, dtype=np.float64)]


def gaussian_stream(seed: int, n: int, d: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal((n, d))


def clustered_stream(seed: int, n: int, d: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    centers = 5.0 * rng.standard_normal((5, d))
    idx = rng.integers(0, 5, n)
    return centers[idx] + 0.2 * rng.standard_normal((n, d))


def widening_stream(seed: int, n: int, d: int, span: float = 1e6) -> np.ndarray:
    """Points whose scale grows geometrically; forces ball evictions."""
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n, d))
    factors = span ** (np.arange(n) / max(n - 1, 1))
    return pts * factors[:, None]
