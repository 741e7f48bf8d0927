"""The streaming sketch: a cover of guarded balls over an insertion-only stream.

Processing a point p against the sketch:

1. If p falls inside the (1+eps)-expansion of any live ball, discard it.
2. Otherwise solve an approximate enclosing ball of Q + {p}, where Q is the
   current guard set (the first stream point plus one guard per live ball),
   and append it as a new ball guarded by p.
3. Evict live balls whose radius is below eps^2 * r_new / 80.
4. Rebuild Q from the first point and the surviving guards.

The sketch is single-writer: `insert` needs exclusive access, while reads
(`guards`, `stats`, serialization) may run concurrently with each other.
Replaying the same stream reproduces the sketch bit-for-bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .geometry import Ball, DimensionMismatchError, Point, dists_from
from .meb import meb_points

__all__ = [
    "GuardedBall",
    "CoverStats",
    "InsertOutcome",
    "Cover",
    "new_cover",
    "max_ball_bound",
    "dumps",
    "loads",
]


@dataclass(frozen=True)
class GuardedBall:
    """A cover ball plus the stream point that created it (its guard)."""

    ball: Ball
    guard: Point
    creation_index: int


@dataclass
class CoverStats:
    """Stream counters: points_seen = points_discarded + balls_created + 1."""

    points_seen: int = 0
    points_discarded: int = 0
    balls_created: int = 0
    balls_deleted: int = 0
    r_max: float = 0.0


@dataclass(frozen=True)
class InsertOutcome:
    kind: Literal["discarded", "created"]
    created: Optional[GuardedBall]
    evicted: tuple[GuardedBall, ...]


def max_ball_bound(epsilon: float) -> int:
    """Ceiling on live balls: each kept radius is at least eps^2/80 of the
    newest and consecutive radii grow by (1+eps^2/8)."""
    if not (0.0 < epsilon <= 1.0):
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon!r}")
    return math.ceil(math.log(80.0 / epsilon**2) / math.log1p(epsilon**2 / 8.0)) + 1


class Cover:
    """Ball-cover sketch over a point stream, one guard point per ball.

    Args:
        epsilon: expansion/error parameter in (0, 1].
        p1: the first stream point; it stays in the guard set forever and
            fixes the stream dimension.
        solver_delta: tolerance of the internal enclosing-ball solves.
            Defaults to epsilon^2 / 16, which preserves the radius-growth
            guarantee; override only for experiments.
    """

    def __init__(self, epsilon: float, p1: Point, solver_delta: float | None = None):
        if not (0.0 < epsilon <= 1.0):
            raise ValueError(f"epsilon must be in (0, 1], got {epsilon!r}")
        self._eps = float(epsilon)
        self._p1 = p1
        self._dim = p1.dim
        self._solver_delta = (
            float(solver_delta) if solver_delta is not None else self._eps**2 / 16.0
        )
        if not (self._solver_delta > 0.0):
            raise ValueError("solver_delta must be > 0")
        self._balls: list[GuardedBall] = []
        self._centers = np.zeros((0, self._dim))
        self._radii = np.zeros(0)
        self._stats = CoverStats(points_seen=1)

    @property
    def epsilon(self) -> float:
        return self._eps

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def p1(self) -> Point:
        return self._p1

    @property
    def balls(self) -> tuple[GuardedBall, ...]:
        """Live balls in creation order."""
        return tuple(self._balls)

    @property
    def stats(self) -> CoverStats:
        return self._stats

    def live_ball_count(self) -> int:
        return len(self._balls)

    def guards(self) -> list[Point]:
        """The guard set Q: p1 first, then live guards in creation order,
        deduplicated by exact coordinates."""
        out = [self._p1]
        seen = {self._p1.coords}
        for gb in self._balls:
            if gb.guard.coords not in seen:
                seen.add(gb.guard.coords)
                out.append(gb.guard)
        return out

    def insert(self, p: Point) -> InsertOutcome:
        """Process one stream point; requires exclusive access."""
        if p.dim != self._dim:
            raise DimensionMismatchError(
                f"dimension mismatch: stream is {self._dim}-d, point is {p.dim}-d"
            )
        self._stats.points_seen += 1
        if self._radii.size:
            dn = dists_from(self._centers, p.as_array())
            if bool(np.any(dn <= (1.0 + self._eps) * self._radii)):
                self._stats.points_discarded += 1
                return InsertOutcome("discarded", None, ())

        result = meb_points(self.guards() + [p], self._solver_delta)
        new_ball = GuardedBall(
            ball=result.ball, guard=p, creation_index=self._stats.balls_created
        )
        self._stats.balls_created += 1
        self._stats.r_max = max(self._stats.r_max, result.ball.radius)

        threshold = self._eps**2 * result.ball.radius / 80.0
        keep = self._radii >= threshold
        evicted = tuple(gb for gb, k in zip(self._balls, keep) if not k)
        self._balls = [gb for gb, k in zip(self._balls, keep) if k]
        self._balls.append(new_ball)
        self._stats.balls_deleted += len(evicted)
        self._centers = np.vstack(
            [self._centers[keep], result.ball.center.as_array()[None, :]]
        )
        self._radii = np.concatenate([self._radii[keep], [result.ball.radius]])
        return InsertOutcome("created", new_ball, evicted)


def new_cover(epsilon: float, p1: Point) -> Cover:
    """Fresh sketch holding only the first stream point."""
    return Cover(epsilon, p1)


def dumps(cover: Cover) -> str:
    """Serialize a sketch to JSON.

    Floats use shortest round-trip decimals, so loads(dumps(c)) rebuilds the
    sketch exactly and dumps is stable under round-trips.
    """
    doc = {
        "epsilon": cover.epsilon,
        "dim": cover.dim,
        "p1": list(cover.p1.coords),
        "balls": [
            {
                "center": list(gb.ball.center.coords),
                "radius": gb.ball.radius,
                "guard": list(gb.guard.coords),
                "creation_index": gb.creation_index,
            }
            for gb in cover.balls
        ],
        "stats": {
            "points_seen": cover.stats.points_seen,
            "points_discarded": cover.stats.points_discarded,
            "balls_created": cover.stats.balls_created,
            "balls_deleted": cover.stats.balls_deleted,
            "r_max": cover.stats.r_max,
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def loads(text: str) -> Cover:
    """Rebuild a sketch from its JSON form (exact inverse of dumps)."""
    doc = json.loads(text)
    cover = Cover(float(doc["epsilon"]), Point(doc["p1"]))
    if int(doc["dim"]) != cover.dim:
        raise ValueError("sketch dim field disagrees with p1")
    balls = [
        GuardedBall(
            ball=Ball(Point(entry["center"]), float(entry["radius"])),
            guard=Point(entry["guard"]),
            creation_index=int(entry["creation_index"]),
        )
        for entry in doc["balls"]
    ]
    cover._balls = balls
    if balls:
        cover._centers = np.ascontiguousarray(
            [gb.ball.center.coords for gb in balls], dtype=np.float64
        )
        cover._radii = np.asarray([gb.ball.radius for gb in balls], dtype=np.float64)
    st = doc["stats"]
    cover._stats = CoverStats(
        points_seen=int(st["points_seen"]),
        points_discarded=int(st["points_discarded"]),
        balls_created=int(st["balls_created"]),
        balls_deleted=int(st["balls_deleted"]),
        r_max=float(st["r_max"]),
    )
    return cover
