"""Single-pass sketching of high-dimensional point streams for extent queries.

The sketch keeps a small set of balls, each guarded by one stream point;
their expansions cover everything ever inserted.  On top of it the library
answers approximate farthest-neighbor queries and maintains the farthest
pair, an approximate minimum enclosing ball, and a coreset for it, with
worst-case ratio guarantees checked by brute-force oracles in the test
suite.
"""

from .adversary import AdversaryReport, LowerBoundInstance, gen_instance, verify
from .audit import AuditCheck, AuditReport, run_audit
from .cover import (
    Cover,
    CoverStats,
    GuardedBall,
    InsertOutcome,
    dumps,
    loads,
    max_ball_bound,
    new_cover,
)
from .geometry import (
    Ball,
    DimensionMismatchError,
    Point,
    ball_support_dist,
    dist,
    in_expansion,
)
from .meb import MebResult, dual_lower_bound, meb_balls, meb_points
from .oracle import RatioReport, brute_fn, brute_fp, gonzalez_2meb, reference_meb
from .queries import DiameterState, approx_meb, coreset, farthest_neighbor

__version__ = "0.1.0"

__all__ = [
    "AdversaryReport",
    "AuditCheck",
    "AuditReport",
    "Ball",
    "Cover",
    "CoverStats",
    "DiameterState",
    "DimensionMismatchError",
    "GuardedBall",
    "InsertOutcome",
    "LowerBoundInstance",
    "MebResult",
    "Point",
    "RatioReport",
    "approx_meb",
    "ball_support_dist",
    "brute_fn",
    "brute_fp",
    "coreset",
    "dist",
    "dual_lower_bound",
    "dumps",
    "farthest_neighbor",
    "gen_instance",
    "gonzalez_2meb",
    "in_expansion",
    "loads",
    "max_ball_bound",
    "meb_balls",
    "meb_points",
    "new_cover",
    "reference_meb",
    "run_audit",
    "verify",
]
