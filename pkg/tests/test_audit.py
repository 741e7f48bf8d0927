import pytest

from ballcover import Point, max_ball_bound, run_audit
from helpers import clustered_stream, gaussian_stream, to_points, widening_stream


def check_names(report):
    return [c.name for c in report.checks]


class TestRunAudit:
    def test_gaussian_stream_all_pass(self):
        report = run_audit(0.2, to_points(gaussian_stream(0, 800, 10)))
        assert check_names(report) == ["growth", "eviction", "nesting", "coverage", "space"]
        assert report.passed
        assert report.n == 800

    def test_widening_stream_exercises_evictions(self):
        report = run_audit(0.5, to_points(widening_stream(1, 800, 6)))
        assert report.passed
        assert report.cover.stats.balls_deleted > 0  # non-vacuous eviction checks

    def test_clustered_stream(self):
        report = run_audit(0.1, to_points(clustered_stream(2, 800, 10)))
        assert report.passed

    def test_space_bound_reported(self):
        report = run_audit(0.5, to_points(gaussian_stream(3, 500, 8)))
        assert report.cover.live_ball_count() <= max_ball_bound(0.5)
        assert len(report.cover.guards()) <= report.cover.live_ball_count() + 1

    def test_duplicate_only_stream(self):
        report = run_audit(0.5, [Point((1, 1))] * 20)
        assert report.passed
        assert report.cover.live_ball_count() == 1

    def test_empty_stream_rejected(self):
        with pytest.raises(ValueError):
            run_audit(0.5, [])
