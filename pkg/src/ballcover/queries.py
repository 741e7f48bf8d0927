"""Extent queries answered from a cover sketch.

All queries read only the guard set and the live balls; `farthest_neighbor`,
`approx_meb` and `coreset` never mutate the cover.  `DiameterState.observe`
inserts, so it needs exclusive access like `Cover.insert`.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .cover import Cover
from .geometry import Ball, DimensionMismatchError, Point, coords_matrix, dist, dists_from
from .meb import meb_balls

__all__ = ["farthest_neighbor", "DiameterState", "approx_meb", "coreset"]


def farthest_neighbor(cover: Cover, x: Point) -> Point:
    """Farthest guard from `x`; ties break toward the earlier guard.

    Answers within a sqrt(2) + 2*epsilon factor of the true farthest stream
    point from x.
    """
    if x.dim != cover.dim:
        raise DimensionMismatchError(
            f"dimension mismatch: sketch is {cover.dim}-d, query is {x.dim}-d"
        )
    guards = cover.guards()
    dn = dists_from(coords_matrix(guards), x.as_array())
    return guards[int(np.argmax(dn))]


def coreset(cover: Cover) -> list[Point]:
    """The guard set Q; every stream point lies within
    (sqrt(2) + 2*epsilon) * r of the center of the enclosing ball of Q."""
    return cover.guards()


def approx_meb(cover: Cover) -> Ball:
    """A ball containing the whole stream, with radius at most
    (1.22 + 3*epsilon) times the optimal enclosing radius.

    The output is the enclosing ball (solved at delta = epsilon/4) of the
    (1+epsilon)-expansions of the live balls, which cover everything ever
    inserted; containment of all expansions is exact by construction.
    """
    if cover.live_ball_count() == 0:
        return Ball(cover.p1, 0.0)
    eps = cover.epsilon
    expanded = [
        Ball(gb.ball.center, (1.0 + eps) * gb.ball.radius) for gb in cover.balls
    ]
    return meb_balls(expanded, delta_out=eps / 4.0)


class DiameterState:
    """Streaming farthest-pair tracker built on a cover.

    Feeds each arriving point into the sketch, then queries its farthest
    guard; the best pair seen is kept.  The maintained distance is within a
    sqrt(2) + 2*epsilon factor of the true diameter.
    """

    def __init__(self, epsilon: float):
        self._eps = float(epsilon)
        self._cover: Optional[Cover] = None
        self._best_pair: Optional[tuple[Point, Point]] = None
        self._best_dist = -np.inf

    @property
    def cover(self) -> Optional[Cover]:
        return self._cover

    @property
    def best_pair(self) -> tuple[Point, Point]:
        if self._best_pair is None:
            raise ValueError("no points observed yet")
        return self._best_pair

    @property
    def best_dist(self) -> float:
        if self._best_pair is None:
            raise ValueError("no points observed yet")
        return self._best_dist

    def observe(self, p: Point) -> "DiameterState":
        """Insert `p`, then update the pair with p's farthest current guard."""
        if self._cover is None:
            self._cover = Cover(self._eps, p)
        else:
            self._cover.insert(p)
        far = farthest_neighbor(self._cover, p)
        d = dist(p, far)
        if d > self._best_dist:
            self._best_pair = (p, far)
            self._best_dist = d
        return self
