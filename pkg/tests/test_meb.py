import math

import numpy as np
import pytest

from ballcover import (
    Ball,
    DimensionMismatchError,
    Point,
    ball_support_dist,
    dist,
    dual_lower_bound,
    meb_balls,
    meb_points,
)
from ballcover.geometry import coords_matrix, dists_from
from exactball import exact_meb
from helpers import to_points


class TestMebPoints:
    def test_single_point(self):
        res = meb_points([Point((3, -1, 2))], 0.1)
        assert res.ball.center == Point((3, -1, 2))
        assert res.ball.radius == 0.0
        assert res.certified_ratio == 1.0

    def test_segment_midpoint(self):
        res = meb_points(to_points([[0, 0, 0], [2, 0, 0]]), 1e-6)
        assert res.ball.center == Point((1, 0, 0))
        assert res.ball.radius == 1.0

    def test_matches_exact_oracle_low_d(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            P = rng.standard_normal((10, 3))
            _, r_exact = exact_meb(P)
            for delta in (0.1, 1e-3, 1e-9):
                res = meb_points(to_points(P), delta)
                assert res.ball.radius <= (1 + delta) * r_exact * (1 + 1e-12)
                assert res.ball.radius >= r_exact * (1 - 1e-12)

    def test_weights_are_convex_combination(self):
        rng = np.random.default_rng(6)
        P = rng.standard_normal((40, 8))
        res = meb_points(to_points(P), 1e-6)
        w = np.asarray(res.support_weights)
        assert w.shape == (40,)
        assert np.all(w >= 0.0)
        assert math.isclose(w.sum(), 1.0, abs_tol=1e-12)
        center = P.T @ w
        assert np.allclose(center, res.ball.center.as_array(), atol=1e-12)

    def test_primal_feasibility_exact(self):
        # radius is defined as the max achieved distance, bit for bit
        rng = np.random.default_rng(7)
        for n, d in [(3, 2), (50, 5), (300, 24)]:
            pts = to_points(rng.standard_normal((n, d)))
            res = meb_points(pts, 1e-4)
            dmax = max(dist(p, res.ball.center) for p in pts)
            assert dmax == res.ball.radius

    def test_certificate_soundness(self):
        rng = np.random.default_rng(8)
        for delta in (0.5, 1e-2, 1e-7):
            pts = to_points(rng.standard_normal((60, 6)))
            res = meb_points(pts, delta)
            phi = dual_lower_bound(pts, res.support_weights)
            assert res.ball.radius**2 <= (1 + delta) ** 2 * phi * (1 + 1e-12)
            assert res.certified_ratio <= 1 + delta

    def test_near_boundary_support_directions(self):
        # at delta=1e-9 the ball is essentially optimal: every halfspace
        # through the center must contain a near-boundary input
        rng = np.random.default_rng(9)
        pts = to_points(rng.standard_normal((120, 10)))
        res = meb_points(pts, 1e-9)
        c = res.ball.center.as_array()
        r = res.ball.radius
        P = coords_matrix(pts)
        dists = dists_from(P, c)
        for _ in range(20):
            u = rng.standard_normal(10)
            u /= np.linalg.norm(u)
            proj = (P - c) @ u
            witness = (proj >= -1e-4 * r) & (dists >= (1 - 1e-4) * r)
            assert witness.any()

    def test_permutation_invariance_of_radius(self):
        # at delta=1e-9 the certificate pins every run into [r*, (1+1e-9) r*]
        rng = np.random.default_rng(10)
        P = rng.standard_normal((30, 4))
        r0 = meb_points(to_points(P), 1e-9).ball.radius
        for seed in range(3):
            perm = np.random.default_rng(seed).permutation(30)
            r1 = meb_points(to_points(P[perm]), 1e-9).ball.radius
            assert abs(r1 - r0) <= 1e-9 * r0

    def test_iteration_cap_returns_flagged_best(self):
        rng = np.random.default_rng(11)
        pts = to_points(rng.standard_normal((50, 5)))
        res = meb_points(pts, 1e-9, max_iterations=3)
        assert res.iterations == 3
        assert res.certified_ratio > 1 + 1e-9  # no certificate yet
        # feasibility still exact
        dmax = max(dist(p, res.ball.center) for p in pts)
        assert dmax == res.ball.radius

    def test_empty_input(self):
        with pytest.raises(ValueError):
            meb_points([], 0.1)

    def test_bad_delta(self):
        with pytest.raises(ValueError):
            meb_points([Point((0,))], 0.0)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            meb_points([Point((0, 0)), Point((0, 0, 0))], 0.1)

    def test_duplicates(self):
        res = meb_points(to_points([[1, 1], [1, 1], [1, 1]]), 1e-9)
        assert res.ball.center == Point((1, 1))
        assert res.ball.radius == 0.0


class TestDualLowerBound:
    def test_single_point(self):
        assert dual_lower_bound([Point((7, -2))], [1.0]) == 0.0

    def test_antipodal_pair(self):
        assert dual_lower_bound(to_points([[-1, 0], [1, 0]]), [0.5, 0.5]) == 1.0

    def test_bounded_by_reference_radius(self):
        rng = np.random.default_rng(12)
        pts = to_points(rng.standard_normal((25, 6)))
        r_ref = meb_points(pts, 1e-9).ball.radius
        for _ in range(20):
            w = rng.random(25)
            w /= w.sum()
            assert dual_lower_bound(pts, w) <= r_ref**2 + 1e-9

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            dual_lower_bound([Point((0,))], [0.5, 0.5])

    def test_negative_weight(self):
        with pytest.raises(ValueError):
            dual_lower_bound(to_points([[0], [1]]), [1.5, -0.5])


class TestMebBalls:
    def test_single_ball_identity(self):
        b = Ball(Point((1, 2, 3)), 4.5)
        out = meb_balls([b], 1e-3)
        assert np.allclose(out.center.as_array(), b.center.as_array(), atol=1e-12)
        assert abs(out.radius - b.radius) <= 1e-12

    def test_two_unit_balls(self):
        out = meb_balls([Ball(Point((0, 0)), 1.0), Ball(Point((4, 0)), 1.0)], 1e-9)
        assert np.allclose(out.center.as_array(), [2, 0], atol=1e-9)
        assert abs(out.radius - 3.0) <= 1e-9

    def test_contained_ball_dominates(self):
        big = Ball(Point((0, 0)), 5.0)
        out = meb_balls([big, Ball(Point((1, 0)), 1.0), Ball(Point((0.5, 0.5)), 0.5)], 1e-6)
        assert abs(out.radius - 5.0) <= 5.0 * 1e-6 + 1e-9

    def test_containment_is_exact(self):
        rng = np.random.default_rng(13)
        for _ in range(5):
            balls = [
                Ball(Point(rng.standard_normal(4) * 2), float(rng.uniform(0.1, 2)))
                for _ in range(5)
            ]
            out = meb_balls(balls, 1e-3)
            for b in balls:
                assert ball_support_dist(out.center, b) <= out.radius

    def test_random_balls_against_boundary_sampling(self):
        # oracle: dense boundary sample of each ball, reference solve on it
        rng = np.random.default_rng(14)
        delta_out = 1e-2
        for _ in range(3):
            centers = rng.standard_normal((5, 4)) * 2
            radii = rng.uniform(0.1, 2.0, 5)
            balls = [Ball(Point(c), float(r)) for c, r in zip(centers, radii)]
            dirs = rng.standard_normal((5, 2000, 4))
            dirs /= np.linalg.norm(dirs, axis=2, keepdims=True)
            samples = (centers[:, None, :] + radii[:, None, None] * dirs).reshape(-1, 4)
            r_sampled = meb_points(to_points(samples), 1e-9).ball.radius
            out = meb_balls(balls, delta_out)
            assert out.radius >= r_sampled * (1 - 1e-9)  # covers the samples
            # sampled reference misses true extremes by a small angular slack
            assert out.radius <= (1 + delta_out) * r_sampled * (1 + 5e-3)

    def test_point_balls_reduce_to_points(self):
        pts = [[0, 0, 0], [2, 0, 0]]
        out = meb_balls([Ball(Point(p), 0.0) for p in pts], 1e-9)
        assert np.allclose(out.center.as_array(), [1, 0, 0], atol=1e-9)
        assert abs(out.radius - 1.0) <= 1e-9

    def test_concentric_balls(self):
        balls = [Ball(Point((1, 1)), r) for r in (0.5, 2.0, 1.0)]
        out = meb_balls(balls, 1e-6)
        assert abs(out.radius - 2.0) <= 2e-6
        for b in balls:
            assert ball_support_dist(out.center, b) <= out.radius

    def test_empty_input(self):
        with pytest.raises(ValueError):
            meb_balls([], 0.1)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            meb_balls([Ball(Point((0,)), 1.0), Ball(Point((0, 0)), 1.0)], 0.1)
