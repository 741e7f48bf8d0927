"""Replay a stream while retaining everything, and check the sketch's
structural guarantees after every insertion.

Checks:
  growth     - consecutive created radii grow by at least (1 + eps^2/8)
  eviction   - each evicted ball fits in a ball of radius eps^2*r_new/40
               around the first point
  nesting    - expansions of evicted balls stay inside expansions of every
               later-created ball
  coverage   - after each insertion every point seen so far lies in the
               (1+eps)-expansion of some live ball
  space      - live balls never exceed max_ball_bound(eps); stored points
               never exceed live balls + 1

Coverage is tracked incrementally: live balls never move or shrink, so a
point only needs re-checking when the ball covering it is evicted.  A full
matrix check at the end backstops the bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .cover import Cover, max_ball_bound
from .geometry import Point, dists_from

__all__ = ["AuditCheck", "AuditReport", "run_audit"]

_SLACK = 1e-9


@dataclass
class AuditCheck:
    name: str
    passed: bool = True
    failures: int = 0
    detail: str = ""

    def fail(self, detail: str) -> None:
        self.failures += 1
        if self.passed:
            self.passed = False
            self.detail = detail


@dataclass
class AuditReport:
    epsilon: float
    n: int
    d: int
    checks: list[AuditCheck] = field(default_factory=list)
    cover: Cover | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def run_audit(epsilon: float, points: Iterable[Point]) -> AuditReport:
    growth = AuditCheck("growth")
    eviction = AuditCheck("eviction")
    nesting = AuditCheck("nesting")
    coverage = AuditCheck("coverage")
    space = AuditCheck("space")

    it = iter(points)
    try:
        p1 = next(it)
    except StopIteration:
        raise ValueError("audit needs a nonempty stream") from None
    cover = Cover(epsilon, p1)
    eps = cover.epsilon
    p1_arr = p1.as_array()
    ball_limit = max_ball_bound(eps)

    seen: list[tuple[float, ...]] = [p1.coords]
    covered_by: list[int] = [-1]  # creation_index of a live ball covering it
    uncovered = 1  # p1 until the first ball exists
    created_radii: list[float] = []
    evicted_log: list[tuple[np.ndarray, float]] = []
    live: dict[int, tuple[np.ndarray, float]] = {}
    live_cache: tuple[list[int], np.ndarray, np.ndarray] | None = None

    def assign(rows: np.ndarray) -> list[int]:
        """Find a covering live ball per row; -1 when none covers."""
        nonlocal live_cache
        if not live:
            return [-1] * rows.shape[0]
        if live_cache is None:
            idxs = list(live.keys())
            live_cache = (
                idxs,
                np.ascontiguousarray([live[i][0] for i in idxs]),
                np.asarray([live[i][1] for i in idxs]),
            )
        idxs, centers, radii = live_cache
        out = []
        for row in rows:
            hits = np.flatnonzero(dists_from(centers, row) <= (1.0 + eps + _SLACK) * radii)
            out.append(idxs[int(hits[0])] if hits.size else -1)
        return out

    step = 0
    for p in it:
        step += 1
        outcome = cover.insert(p)
        seen.append(p.coords)

        if outcome.kind == "created":
            gb = outcome.created
            r_new = gb.ball.radius
            c_new = gb.ball.center.as_array()
            if created_radii:
                r_prev = created_radii[-1]
                if r_new < (1.0 + eps**2 / 8.0) * r_prev - _SLACK * r_new:
                    growth.fail(f"step {step}: r_new={r_new!r} after r_prev={r_prev!r}")
            created_radii.append(r_new)

            for old in outcome.evicted:
                c_old = old.ball.center.as_array()
                r_old = old.ball.radius
                reach = float(dists_from(c_old.reshape(1, -1), p1_arr)[0]) + r_old
                if reach > eps**2 * r_new / 40.0:
                    eviction.fail(
                        f"step {step}: evicted ball reaches {reach!r} from the "
                        f"first point, limit {eps**2 * r_new / 40.0!r}"
                    )
                evicted_log.append((c_old, r_old))
                live.pop(old.creation_index, None)

            for c_old, r_old in evicted_log:
                gap = float(dists_from(c_old.reshape(1, -1), c_new)[0])
                if gap + (1.0 + eps) * r_old > (1.0 + eps) * r_new + _SLACK:
                    nesting.fail(
                        f"step {step}: evicted ball (r={r_old!r}) escapes the "
                        f"expansion of the new ball (r={r_new!r})"
                    )

            live[gb.creation_index] = (c_new, r_new)
            live_cache = None
            covered_by.append(gb.creation_index)
            # points orphaned by evictions, plus any still-uncovered backlog
            gone = {old.creation_index for old in outcome.evicted}
            gone.add(-1)
            retry = [i for i, owner in enumerate(covered_by[:-1]) if owner in gone]
            if retry:
                rows = np.ascontiguousarray([seen[i] for i in retry])
                for i, owner in zip(retry, assign(rows)):
                    covered_by[i] = owner
            uncovered = sum(1 for owner in covered_by if owner == -1)
        else:
            owner = assign(p.as_array().reshape(1, -1))[0]
            covered_by.append(owner)
            if owner == -1:
                uncovered += 1

        if uncovered:
            coverage.fail(f"step {step}: {uncovered} retained points uncovered")

        if cover.live_ball_count() > ball_limit:
            space.fail(
                f"step {step}: {cover.live_ball_count()} live balls, limit {ball_limit}"
            )
        if len(cover.guards()) > cover.live_ball_count() + 1:
            space.fail(f"step {step}: guard set larger than live balls + 1")

    # backstop: full coverage check of every retained point at stream end
    if cover.live_ball_count():
        pts = np.ascontiguousarray(seen, dtype=np.float64)
        centers = np.ascontiguousarray([gb.ball.center.coords for gb in cover.balls])
        radii = np.asarray([gb.ball.radius for gb in cover.balls])
        for i in range(pts.shape[0]):
            if not np.any(dists_from(centers, pts[i]) <= (1.0 + eps + _SLACK) * radii):
                coverage.fail(f"final: retained point {i} not covered")

    report = AuditReport(epsilon=eps, n=len(seen), d=cover.dim)
    report.checks = [growth, eviction, nesting, coverage, space]
    report.cover = cover
    return report
