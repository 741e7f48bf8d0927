"""Hard instances showing that storing o(1/eps) points loses farthest-neighbor
accuracy.

The construction inserts k = 1/(2*eps) + 1 standard basis points.  For the
query q_j (coordinate j equal to -1, the other first k coordinates equal to
2*eps), the true farthest point is e_j at distance sqrt(4 + 2*eps), while
every other basis point sits at distance sqrt(2 - 2*eps).  Any query answered
without e_j in memory is therefore off by at least
sqrt((4 + 2*eps) / (2 - 2*eps)) > sqrt(2) + eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Point, dist

__all__ = ["LowerBoundInstance", "AdversaryReport", "gen_instance", "verify"]

_REL_TOL = 1e-12


@dataclass(frozen=True)
class LowerBoundInstance:
    epsilon: float
    k: int
    d: int
    basis_points: tuple[Point, ...]
    queries: tuple[Point, ...]
    d_far: float
    d_near: float

    @property
    def ratio(self) -> float:
        return self.d_far / self.d_near


@dataclass(frozen=True)
class AdversaryReport:
    """Measured distances of an instance against the closed forms."""

    epsilon: float
    k: int
    d_far: float
    d_near: float
    max_far_error: float
    max_near_error: float
    ratio: float
    bound: float
    worst_missing_ratio: float
    passed: bool


def _is_integral(x: float) -> bool:
    return abs(x - round(x)) <= 1e-9


def gen_instance(epsilon: float, d: int | None = None) -> LowerBoundInstance:
    """Build the instance for `epsilon`; `d` defaults to the smallest legal
    dimension k.  Requires 2/epsilon integral (and thereby k itself)."""
    if not (0.0 < epsilon <= 1.0):
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon!r}")
    if not _is_integral(2.0 / epsilon):
        raise ValueError(f"2/epsilon must be an integer, got {2.0 / epsilon!r}")
    k_float = 1.0 / (2.0 * epsilon) + 1.0
    if not _is_integral(k_float):
        raise ValueError(f"1/(2*epsilon) + 1 must be an integer, got {k_float!r}")
    k = round(k_float)
    if d is None:
        d = k
    if d < k:
        raise ValueError(f"d must be at least k={k}, got {d}")

    basis = []
    for i in range(k):
        coords = [0.0] * d
        coords[i] = 1.0
        basis.append(Point(coords))
    queries = []
    for j in range(k):
        coords = [0.0] * d
        for i in range(k):
            coords[i] = 2.0 * epsilon
        coords[j] = -1.0
        queries.append(Point(coords))

    return LowerBoundInstance(
        epsilon=float(epsilon),
        k=k,
        d=d,
        basis_points=tuple(basis),
        queries=tuple(queries),
        d_far=math.sqrt(4.0 + 2.0 * epsilon),
        d_near=math.sqrt(2.0 - 2.0 * epsilon),
    )


def verify(instance: LowerBoundInstance) -> AdversaryReport:
    """Measure all k^2 query-to-basis distances and compare with the closed
    forms.  A failed comparison shows up in the report, never as an
    exception."""
    eps = instance.epsilon
    max_far = 0.0
    max_near = 0.0
    for j, q in enumerate(instance.queries):
        for i, e in enumerate(instance.basis_points):
            measured = dist(q, e)
            if i == j:
                max_far = max(max_far, abs(measured - instance.d_far))
            else:
                max_near = max(max_near, abs(measured - instance.d_near))
    bound = math.sqrt(2.0) + eps
    ratio = instance.d_far / instance.d_near
    ok = (
        max_far <= _REL_TOL * (1.0 + instance.d_far)
        and max_near <= _REL_TOL * (1.0 + instance.d_near)
        and ratio > bound
    )
    return AdversaryReport(
        epsilon=eps,
        k=instance.k,
        d_far=instance.d_far,
        d_near=instance.d_near,
        max_far_error=max_far,
        max_near_error=max_near,
        ratio=ratio,
        bound=bound,
        # best answer available once e_j is gone: a d_near point
        worst_missing_ratio=ratio,
        passed=ok,
    )
