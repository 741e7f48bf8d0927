"""Command-line front end: stream ingestion, sketch build/save/load, queries,
invariant audits, the hard-instance demo, and ratio benchmarks.

Exit codes: 0 success, 1 usage error, 2 data error, 3 bound violation found
by `audit` or `bench` (or a failed `adversary` verdict).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from typing import Iterator, Sequence, TextIO

import numpy as np

from .adversary import gen_instance, verify
from .audit import run_audit
from .cover import Cover, dumps, loads, max_ball_bound
from .geometry import DimensionMismatchError, Point, coords_matrix, dist, dists_from
from .oracle import RatioReport, brute_fn, brute_fp, gonzalez_2meb, reference_meb
from .queries import DiameterState, approx_meb, coreset, farthest_neighbor

__all__ = [
    "StreamSource",
    "StreamFormatError",
    "BenchConfig",
    "parse_points",
    "generate_stream",
    "run_command",
    "main",
]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VIOLATION = 3

_BENCH_QUERIES = 50


class StreamFormatError(ValueError):
    """Malformed stream input; the message carries the offending line number."""


@dataclass(frozen=True)
class StreamSource:
    """A point stream: csv or jsonl, from a file path or '-' for stdin."""

    path: str
    format: str = "csv"


@dataclass(frozen=True)
class BenchConfig:
    n: int
    d: int
    epsilon: float
    distribution: str
    seed: int


def _parse_csv_line(line: str, lineno: int) -> list[float]:
    try:
        return [float(tok) for tok in line.split(",")]
    except ValueError as exc:
        raise StreamFormatError(f"line {lineno}: {exc}") from None


def _parse_jsonl_line(line: str, lineno: int) -> list[float]:
    try:
        row = json.loads(line)
    except json.JSONDecodeError as exc:
        raise StreamFormatError(f"line {lineno}: {exc}") from None
    if not isinstance(row, list) or not row:
        raise StreamFormatError(f"line {lineno}: expected a nonempty JSON array")
    vals = []
    for v in row:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise StreamFormatError(f"line {lineno}: non-numeric entry {v!r}")
        vals.append(float(v))
    return vals


def _iter_source(source: StreamSource, handle: TextIO) -> Iterator[Point]:
    parse = _parse_csv_line if source.format == "csv" else _parse_jsonl_line
    dim = None
    for lineno, raw in enumerate(handle, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        vals = parse(line, lineno)
        if dim is None:
            dim = len(vals)
        elif len(vals) != dim:
            raise StreamFormatError(
                f"line {lineno}: dimension drift, expected {dim} got {len(vals)}"
            )
        try:
            yield Point(vals)
        except ValueError as exc:
            raise StreamFormatError(f"line {lineno}: {exc}") from None


def parse_points(source: StreamSource) -> Iterator[Point]:
    """Lazily parse a stream; raises StreamFormatError with a line number on
    malformed rows or dimension drift."""
    if source.format not in ("csv", "jsonl"):
        raise StreamFormatError(f"unknown format {source.format!r}")
    if source.path == "-":
        yield from _iter_source(source, sys.stdin)
    else:
        with open(source.path, "r", encoding="utf-8") as handle:
            yield from _iter_source(source, handle)


def format_point(p: Point) -> str:
    """Comma-separated shortest round-trip decimals, the CSV row format."""
    return ",".join(repr(x) for x in p.coords)


def parse_query_point(text: str) -> Point:
    return Point(_parse_csv_line(text.strip(), 1))


def generate_stream(config: BenchConfig) -> np.ndarray:
    """Seeded deterministic (n, d) stream for benchmarks."""
    rng = np.random.default_rng(config.seed)
    n, d = config.n, config.d
    if config.distribution == "gaussian":
        return rng.standard_normal((n, d))
    if config.distribution == "sphere":
        pts = rng.standard_normal((n, d))
        norms = np.sqrt(np.einsum("ij,ij->i", pts, pts))
        norms[norms == 0.0] = 1.0
        return pts / norms[:, None]
    if config.distribution == "clustered":
        centers = 5.0 * rng.standard_normal((5, d))
        idx = rng.integers(0, 5, n)
        return centers[idx] + 0.2 * rng.standard_normal((n, d))
    raise ValueError(f"unknown distribution {config.distribution!r}")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let values like "-1,0,0" (negative first coordinate) pass as
        # arguments instead of being read as option strings
        self._negative_number_matcher = re.compile(r"^-\d[\d.,eE+-]*$")

    def error(self, message: str) -> None:
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ballcover", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a sketch from a stream and save it")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--input", required=True, help="point stream path, '-' for stdin")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--save", required=True, help="sketch output path")

    p = sub.add_parser("query", help="query a saved sketch")
    qsub = p.add_subparsers(dest="query_kind", required=True)
    q = qsub.add_parser("fn", help="approximate farthest neighbor")
    q.add_argument("--sketch", required=True)
    q.add_argument("--point", required=True, help='comma-separated, e.g. "1.5,0,2"')

    p = sub.add_parser("diameter", help="stream a file and report the farthest pair")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")

    p = sub.add_parser("meb", help="approximate enclosing ball of a saved sketch")
    p.add_argument("--sketch", required=True)

    p = sub.add_parser("coreset", help="print the guard set of a saved sketch as CSV")
    p.add_argument("--sketch", required=True)

    p = sub.add_parser("stats", help="print sketch statistics")
    p.add_argument("--sketch", required=True)

    p = sub.add_parser("audit", help="replay a stream and check every invariant")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")

    p = sub.add_parser("adversary", help="generate and verify a hard instance")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--export", help="write the instance points as CSV")

    p = sub.add_parser("bench", help="measure query ratios against brute force")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--dist", choices=["gaussian", "sphere", "clustered"], default="gaussian")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--baseline", choices=["gonzalez"], default=None)

    return parser


def _load_sketch(path: str) -> Cover:
    with open(path, "r", encoding="utf-8") as handle:
        return loads(handle.read())


def _cmd_build(args: argparse.Namespace, out: TextIO) -> int:
    stream = parse_points(StreamSource(args.input, args.format))
    try:
        first = next(stream)
    except StopIteration:
        raise StreamFormatError("empty stream") from None
    cover = Cover(args.epsilon, first)
    for p in stream:
        cover.insert(p)
    with open(args.save, "w", encoding="utf-8") as handle:
        handle.write(dumps(cover))
    out.write(
        f"points_seen={cover.stats.points_seen} live_balls={cover.live_ball_count()} "
        f"saved={args.save}\n"
    )
    return EXIT_OK


def _cmd_query_fn(args: argparse.Namespace, out: TextIO) -> int:
    cover = _load_sketch(args.sketch)
    x = parse_query_point(args.point)
    answer = farthest_neighbor(cover, x)
    out.write(format_point(answer) + "\n")
    out.write(f"distance {dist(answer, x)!r}\n")
    return EXIT_OK


def _cmd_diameter(args: argparse.Namespace, out: TextIO) -> int:
    state = DiameterState(args.epsilon)
    count = 0
    for p in parse_points(StreamSource(args.input, args.format)):
        state.observe(p)
        count += 1
    if count == 0:
        raise StreamFormatError("empty stream")
    a, b = state.best_pair
    out.write(
        json.dumps(
            {
                "pair": [list(a.coords), list(b.coords)],
                "distance": state.best_dist,
            }
        )
        + "\n"
    )
    return EXIT_OK


def _cmd_meb(args: argparse.Namespace, out: TextIO) -> int:
    cover = _load_sketch(args.sketch)
    ball = approx_meb(cover)
    out.write(
        json.dumps({"center": list(ball.center.coords), "radius": ball.radius}) + "\n"
    )
    return EXIT_OK


def _cmd_coreset(args: argparse.Namespace, out: TextIO) -> int:
    cover = _load_sketch(args.sketch)
    for p in coreset(cover):
        out.write(format_point(p) + "\n")
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace, out: TextIO) -> int:
    cover = _load_sketch(args.sketch)
    st = cover.stats
    out.write(
        json.dumps(
            {
                "epsilon": cover.epsilon,
                "dim": cover.dim,
                "points_seen": st.points_seen,
                "points_discarded": st.points_discarded,
                "balls_created": st.balls_created,
                "balls_deleted": st.balls_deleted,
                "live_balls": cover.live_ball_count(),
                "guards": len(cover.guards()),
                "r_max": st.r_max,
                "max_ball_bound": max_ball_bound(cover.epsilon),
            }
        )
        + "\n"
    )
    return EXIT_OK


def _cmd_audit(args: argparse.Namespace, out: TextIO) -> int:
    report = run_audit(args.epsilon, parse_points(StreamSource(args.input, args.format)))
    for check in report.checks:
        if check.passed:
            out.write(f"{check.name}: PASS\n")
        else:
            out.write(f"{check.name}: FAIL ({check.failures} failures; {check.detail})\n")
    out.write(
        f"points={report.n} live_balls={report.cover.live_ball_count()} "
        f"guards={len(report.cover.guards())}\n"
    )
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _cmd_adversary(args: argparse.Namespace, out: TextIO) -> int:
    instance = gen_instance(args.epsilon)
    report = verify(instance)
    if args.export:
        with open(args.export, "w", encoding="utf-8") as handle:
            handle.write(f"# hard instance epsilon={args.epsilon!r} k={instance.k}\n")
            for p in instance.basis_points:
                handle.write(format_point(p) + "\n")
            handle.write("# queries (not part of the stream):\n")
            for q in instance.queries:
                handle.write("# " + format_point(q) + "\n")
    out.write(f"k={instance.k} d={instance.d}\n")
    out.write(f"d_far={report.d_far!r} d_near={report.d_near!r}\n")
    out.write(f"ratio={report.ratio!r} bound={report.bound!r}\n")
    out.write(f"verdict {'PASS' if report.passed else 'FAIL'}\n")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _bench_reports(config: BenchConfig, baseline: str | None) -> list[dict]:
    data = generate_stream(config)
    points = [Point(row) for row in data]
    eps = config.epsilon

    state = DiameterState(eps)
    for p in points:
        state.observe(p)
    cover = state.cover

    rng = np.random.default_rng(config.seed + 1)
    fn_worst = 0.0
    for row in rng.standard_normal((_BENCH_QUERIES, config.d)):
        x = Point(row)
        truth = dist(brute_fn(points, x), x)
        got = dist(farthest_neighbor(cover, x), x)
        if got > 0.0:
            fn_worst = max(fn_worst, truth / got)
        elif truth > 0.0:
            fn_worst = math.inf

    a, b = brute_fp(points)
    true_diam = dist(a, b)
    diam_ratio = true_diam / state.best_dist if state.best_dist > 0 else 1.0

    ref = reference_meb(points)
    out_ball = approx_meb(cover)
    meb_ratio = out_ball.radius / ref.radius if ref.radius > 0 else 1.0

    guard_ball = reference_meb(coreset(cover))
    if guard_ball.radius > 0:
        dn = dists_from(coords_matrix(points), guard_ball.center.as_array())
        coreset_ratio = float(dn.max()) / guard_ball.radius
    else:
        coreset_ratio = 1.0

    fn_bound = math.sqrt(2.0) + 2.0 * eps
    rows = [
        ("fn", fn_worst, fn_bound),
        ("diameter", diam_ratio, fn_bound),
        ("meb", meb_ratio, 1.22 + 3.0 * eps),
        ("coreset", coreset_ratio, fn_bound),
    ]
    if baseline == "gonzalez":
        gball = gonzalez_2meb(points)
        rows.append(("gonzalez", gball.radius / ref.radius if ref.radius > 0 else 1.0, 2.0))

    reports = []
    for metric, measured, bound in rows:
        rep = RatioReport(
            n=config.n,
            d=config.d,
            epsilon=eps,
            measured_max_ratio=float(measured),
            bound=float(bound),
        )
        reports.append(
            {
                "metric": metric,
                "n": rep.n,
                "d": rep.d,
                "epsilon": rep.epsilon,
                "measured_max_ratio": rep.measured_max_ratio,
                "bound": rep.bound,
                "pass": rep.passed,
            }
        )
    return reports


def _cmd_bench(args: argparse.Namespace, out: TextIO) -> int:
    config = BenchConfig(
        n=args.n, d=args.d, epsilon=args.epsilon, distribution=args.dist, seed=args.seed
    )
    if args.n < 2:
        raise ValueError("bench needs n >= 2")
    reports = _bench_reports(config, args.baseline)
    ok = all(r["pass"] for r in reports)
    out.write(
        json.dumps(
            {
                "config": {
                    "n": config.n,
                    "d": config.d,
                    "epsilon": config.epsilon,
                    "distribution": config.distribution,
                    "seed": config.seed,
                },
                "reports": reports,
                "pass": ok,
            },
            indent=2,
        )
        + "\n"
    )
    return EXIT_OK if ok else EXIT_VIOLATION


_HANDLERS = {
    "build": _cmd_build,
    "diameter": _cmd_diameter,
    "meb": _cmd_meb,
    "coreset": _cmd_coreset,
    "stats": _cmd_stats,
    "audit": _cmd_audit,
    "adversary": _cmd_adversary,
    "bench": _cmd_bench,
}


def run_command(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Run one CLI invocation; returns the process exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)
    try:
        if args.command == "query":
            return _cmd_query_fn(args, out)
        return _HANDLERS[args.command](args, out)
    except (StreamFormatError, DimensionMismatchError) as exc:
        err.write(f"data error: {exc}\n")
        return EXIT_DATA
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        err.write(f"data error: {exc}\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
