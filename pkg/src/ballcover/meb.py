"""Certified (1+delta)-approximate minimum enclosing balls.

The solver works on the convex-weight formulation: for weights u on the
simplex, the weighted center is c(u) = sum_i u_i p_i and

    phi(u) = sum_i u_i ||p_i||^2 - ||c(u)||^2

lower-bounds the squared optimal radius for *any* convex weights, while the
worst input distance from c(u) upper-bounds it.  Iteration stops once

    max_i ||p_i - c(u)||^2  <=  (1+delta)^2 * phi(u)

which certifies the returned ball without knowing the optimum.  Steps are
pairwise Frank-Wolfe moves (shift weight from the least-supporting atom to
the farthest one), plus a periodic least-squares polish of the active
support that jumps straight to the best weights on the current face.  The
polish only ever replaces the iterate when it verifiably increases phi, so
the certificate semantics are unchanged.

Enclosing balls of a finite union of balls reuse the same machinery through
a farthest-witness loop: the farthest boundary point of the union is a
legitimate atom, so the point solver run on collected witnesses yields both
a center and a valid dual bound for the union problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import (
    Ball,
    DimensionMismatchError,
    Point,
    coords_matrix,
    dists_from,
)

__all__ = ["MebResult", "meb_points", "dual_lower_bound", "meb_balls"]

# Pairwise steps between polish attempts.
_POLISH_EVERY = 32
# Iterations without any dual improvement before giving up on certification.
_STAGNATION_WINDOW = 4096
# Hard ceiling on iterations regardless of delta; keeps adversarial inputs
# from grinding for hours (the result is then flagged via certified_ratio).
_PRACTICAL_CAP = 200_000


@dataclass(frozen=True)
class MebResult:
    """Outcome of a certified enclosing-ball solve.

    `ball.radius` is exactly the largest input distance from `ball.center`,
    so the ball always contains every input.  `certified_ratio` is
    radius / sqrt(phi(support_weights)); it is <= 1+delta whenever the
    solver terminated with a certificate, and larger only if the iteration
    cap was hit first.
    """

    ball: Ball
    support_weights: tuple[float, ...]
    iterations: int
    certified_ratio: float


def dual_lower_bound(points: Sequence[Point], weights: Sequence[float]) -> float:
    """phi(u) = sum_i u_i ||p_i||^2 - ||sum_i u_i p_i||^2.

    Valid lower bound on the squared optimal enclosing radius for any
    nonnegative weights summing to 1.
    """
    pts = list(points)
    w = np.asarray(list(weights), dtype=np.float64)
    if w.shape[0] != len(pts):
        raise ValueError(f"{len(pts)} points but {w.shape[0]} weights")
    if np.any(w < 0.0):
        raise ValueError("negative weight")
    P = coords_matrix(pts)
    b = np.einsum("ij,ij->i", P, P)
    c = P.T @ w
    return float(w @ b - c @ c)


def _face_weights(P: np.ndarray, b: np.ndarray, idx: np.ndarray) -> np.ndarray | None:
    """Stationary weights of phi on the affine hull of the atoms in `idx`.

    Solves the KKT system [2G 1; 1^T 0] [w; lam] = [b; 1] by least squares
    (the Gram matrix G is singular for affinely dependent atoms).
    """
    S = P[idx]
    k = idx.shape[0]
    A = np.zeros((k + 1, k + 1))
    A[:k, :k] = 2.0 * (S @ S.T)
    A[:k, k] = 1.0
    A[k, :k] = 1.0
    rhs = np.concatenate([b[idx], [1.0]])
    try:
        sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    except np.linalg.LinAlgError:
        return None
    w = sol[:k]
    if not np.all(np.isfinite(w)):
        return None
    return w


def _try_face(
    P: np.ndarray, b: np.ndarray, cand: np.ndarray, phi: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float, float] | None:
    """Best feasible face iterate reachable from `cand` by dropping negatives."""
    for _ in range(cand.shape[0]):
        if cand.size == 0:
            return None
        w = _face_weights(P, b, cand)
        if w is None:
            return None
        neg = w < -1e-12
        if not np.any(neg):
            w = np.clip(w, 0.0, None)
            total = w.sum()
            if total <= 0.0:
                return None
            w /= total
            c2 = P[cand].T @ w
            ub2 = float(w @ b[cand])
            phi2 = ub2 - float(c2 @ c2)
            if phi2 > phi:
                return cand, w, c2, ub2, phi2
            return None
        keep = ~neg
        if not keep.any():
            return None
        cand = cand[keep]
    return None


def _solve_weights(
    P: np.ndarray, delta: float, max_iterations: int | None
) -> tuple[np.ndarray, int]:
    """Run the certified iteration on a coordinate matrix; return (weights, iters)."""
    n, d = P.shape
    b = np.einsum("ij,ij->i", P, P)
    u = np.zeros(n)
    u[0] = 1.0
    c = P[0].copy()
    ub = float(b[0])
    thresh = (1.0 + delta) ** 2
    if max_iterations is None:
        max_iterations = min(math.ceil(100.0 / delta) + 10_000, _PRACTICAL_CAP)
    it = 0
    stall = 0
    best_phi = -math.inf
    best_since = 0
    while it < max_iterations:
        it += 1
        g = b - 2.0 * (P @ c)
        cc = float(c @ c)
        phi = ub - cc
        s = int(np.argmax(g))
        primal_sq = g[s] + cc
        if (phi > 0.0 and primal_sq <= thresh * phi) or (phi <= 0.0 and primal_sq <= 0.0):
            break
        if phi > best_phi * (1.0 + 1e-15) or best_phi <= 0.0 < phi:
            best_phi = phi
            best_since = it
        if it - best_since > _STAGNATION_WINDOW:
            break

        sup = np.flatnonzero(u > 0.0)
        v = int(sup[int(np.argmin(g[sup]))])
        moved = False
        if s != v:
            # pairwise step: shift weight u_v -> u_s, exact line search on phi
            wd = P[s] - P[v]
            denom = float(wd @ wd)
            if denom > 0.0:
                gamma = min(max((g[s] - g[v]) / (2.0 * denom), 0.0), float(u[v]))
                if gamma > 0.0:
                    u[s] += gamma
                    u[v] -= gamma
                    if u[v] < 0.0:
                        u[v] = 0.0
                    c = c + gamma * wd
                    ub = ub + gamma * float(b[s] - b[v])
                    moved = True
        if moved:
            stall = 0
        else:
            stall += 1
            if stall > 64:
                break

        if it % _POLISH_EVERY == 0:
            dist_sq = g + cc
            rmax_sq = float(dist_sq[s])
            band = max(4.0 * (rmax_sq - phi), 1e-12 * rmax_sq)
            wide = np.flatnonzero(dist_sq >= rmax_sq - band)
            if wide.shape[0] > 3 * (d + 2):
                order = np.argsort(dist_sq[wide])[::-1]
                wide = wide[order[: 3 * (d + 2)]]
            sup = np.flatnonzero(u > 0.0)
            jump = None
            for cand in (np.union1d(wide, sup), np.union1d(sup, [s])):
                res = _try_face(P, b, cand, phi)
                if res is not None and (jump is None or res[4] > jump[4]):
                    jump = res
            if jump is not None:
                cand, w, c, ub, _ = jump
                u = np.zeros(n)
                u[cand] = w
            # kill incremental drift
            u /= u.sum()
            c = P.T @ u
            ub = float(u @ b)
    total = u.sum()
    u = np.clip(u / total, 0.0, None)
    u /= u.sum()
    return u, it


def meb_points(
    points: Sequence[Point], delta: float, max_iterations: int | None = None
) -> MebResult:
    """Enclosing ball of a point set, radius within (1+delta) of optimal.

    Args:
        points: nonempty points of a common dimension.
        delta: relative radius tolerance, > 0.
        max_iterations: optional cap override; when the cap is reached
            before the certificate holds, the best iterate is returned and
            its actual quality is reported in `certified_ratio`.

    Returns:
        MebResult whose ball contains every input exactly (its radius is the
        max achieved distance) and whose center is the convex combination of
        the inputs given by `support_weights`.
    """
    pts = list(points)
    if not pts:
        raise ValueError("meb_points needs at least one point")
    if not (delta > 0.0):
        raise ValueError(f"delta must be > 0, got {delta!r}")
    P = coords_matrix(pts)
    # solve relative to the first point: phi is translation-invariant and
    # centered coordinates avoid cancellation when the cloud sits far from
    # the origin
    shift = P[0].copy()
    S = np.ascontiguousarray(P - shift)
    u, iterations = _solve_weights(S, delta, max_iterations)
    c_s = S.T @ u
    c = shift + c_s
    radii = dists_from(P, c)
    radius = float(radii.max())
    phi = float(u @ np.einsum("ij,ij->i", S, S) - c_s @ c_s)
    if phi > 0.0:
        ratio = radius / math.sqrt(phi)
    else:
        ratio = 1.0 if radius == 0.0 else math.inf
    ball = Ball(Point(c), radius)
    return MebResult(
        ball=ball,
        support_weights=tuple(float(x) for x in u),
        iterations=iterations,
        certified_ratio=max(ratio, 1.0),
    )


def _farthest_witness(
    centers: np.ndarray, radii: np.ndarray, c: np.ndarray
) -> tuple[np.ndarray, float]:
    """Farthest point of the union of balls from `c` (a boundary point)."""
    dn = dists_from(centers, c)
    j = int(np.argmax(dn + radii))
    if dn[j] > 0.0:
        q = centers[j] + radii[j] * (centers[j] - c) / dn[j]
    else:
        # c sits on this ball's center: any boundary direction works
        q = centers[j].copy()
        q[0] += radii[j]
    return q, float(dn[j] + radii[j])


def meb_balls(balls: Sequence[Ball], delta_out: float, max_outer: int = 1000) -> Ball:
    """Ball containing a finite union of balls, radius within (1+delta_out).

    Containment is unconditional: the returned radius is the exact maximum
    of dist(center, ball_i.center) + ball_i.radius over the inputs.  The
    approximation factor is certified by running the point solver over
    farthest boundary witnesses of the union, whose dual value lower-bounds
    the optimal union radius.
    """
    items = list(balls)
    if not items:
        raise ValueError("meb_balls needs at least one ball")
    if not (delta_out > 0.0):
        raise ValueError(f"delta_out must be > 0, got {delta_out!r}")
    d = items[0].dim
    for bl in items[1:]:
        if bl.dim != d:
            raise DimensionMismatchError(f"dimension mismatch: {d} vs {bl.dim}")
    if len(items) == 1:
        return items[0]

    centers = coords_matrix([bl.center for bl in items])
    radii = np.asarray([bl.radius for bl in items], dtype=np.float64)
    start, _ = _farthest_witness(centers, radii, centers.mean(axis=0))
    shift = start.copy()
    witnesses = [start]
    c = start
    for _ in range(max_outer):
        W = np.ascontiguousarray(witnesses)
        S = np.ascontiguousarray(W - shift)
        u, _ = _solve_weights(S, delta_out / 8.0, None)
        c_s = S.T @ u
        c = shift + c_s
        phi = float(u @ np.einsum("ij,ij->i", S, S) - c_s @ c_s)
        keep = np.flatnonzero(u > 1e-12)
        witnesses = [W[i] for i in keep]
        q, primal = _farthest_witness(centers, radii, c)
        if phi > 0.0 and primal * primal <= (1.0 + delta_out) ** 2 * phi:
            break
        if phi <= 0.0 and primal <= 0.0:
            break
        witnesses.append(q)
    # final inflation pass: containment of every input ball by construction
    support = dists_from(centers, c) + radii
    return Ball(Point(c), float(support.max()))
