"""``modegap`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
3 unreasonable cost matrix, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from . import formats
from .certify import (
    brute_force_oracle,
    default_resolution,
    find_counterexample,
    grid_size,
    mode_is_bayes,
    MAX_GRID_POINTS,
)
from .cost_matrix import canonicalize, validate_reasonable
from .decision import MASK64, bayes_set, expected_losses, mode_set, regret, sample_decision
from .errors import (
    DimensionMismatch,
    InvariantViolation,
    NotReasonable,
    ParseError,
)
from .rational import fraction_decimal
from .region import bayes_regions_ternary, disagreement_region, render_svg

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_UNREASONABLE, EXIT_INTERNAL = 0, 1, 2, 3, 4

SUBCOMMANDS = ("canonicalize", "decide", "certify", "oracle", "regions", "regret")
TIE_POLICIES = ("uniform", "worst-case")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    matrix_path: str
    probs_path: Optional[str] = None
    output_path: Optional[str] = None
    resolution: Optional[int] = None
    renormalize: bool = False
    tie_policy: str = "uniform"
    threads: int = 1
    seed: int = 0
    matrix_format: Optional[str] = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if not self.matrix_path:
            raise UsageError("--matrix is required")
        if self.resolution is not None and self.resolution < 1:
            raise UsageError("--resolution must be >= 1")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.tie_policy not in TIE_POLICIES:
            raise UsageError(f"--tie-policy must be one of {TIE_POLICIES}")
        if self.subcommand in ("decide", "regret") and not self.probs_path:
            raise UsageError(f"{self.subcommand} requires --probs")


@dataclass
class RegretSummary:
    n_vectors: int
    mean_regret: Fraction
    max_regret: Fraction
    disagreement_rate: Fraction
    records: list = field(default_factory=list)

    def to_json(self, tie_policy: str) -> dict:
        out = {"n_vectors": self.n_vectors, "tie_policy": tie_policy}
        for name in ("mean_regret", "max_regret", "disagreement_rate"):
            value = getattr(self, name)
            out[name] = str(value)
            out[f"{name}_decimal"] = fraction_decimal(value)
        return out


def summarize_regret(L, vectors: Iterable, tie_policy: str = "uniform", keep_records: bool = False) -> RegretSummary:
    """Accumulate exact regret statistics over a stream of vectors."""
    n = 0
    total = Fraction(0)
    worst = Fraction(0)
    positive = 0
    records = []
    for p in vectors:
        r = regret(L, p, tie_policy.replace("-", "_"))
        n += 1
        total += r
        worst = max(worst, r)
        positive += r > 0
        if keep_records:
            records.append((p, r))
    if n == 0:
        return RegretSummary(0, Fraction(0), Fraction(0), Fraction(0), records)
    return RegretSummary(n, total / n, worst, Fraction(positive, n), records)


def _decide_lines(L, vectors, seed: int):
    for row, p in enumerate(vectors, start=1):
        modes, bayes = mode_set(p), bayes_set(L, p)
        losses = expected_losses(L, p)
        yield formats.dumps_line({
            "row": row,
            "p": [str(x) for x in p.probs],
            "mode": formats.decision_to_json(modes),
            "bayes": formats.decision_to_json(bayes),
            "expected_losses": [str(x) for x in losses],
            "expected_losses_decimal": [fraction_decimal(x) for x in losses],
            "mode_sample": sample_decision(modes, (seed + 2 * row) & MASK64),
            "bayes_sample": sample_decision(bayes, (seed + 2 * row + 1) & MASK64),
        })


def _oracle_doc(L, resolution: int, threads: int) -> dict:
    cx = brute_force_oracle(L, resolution, workers=threads)
    return {
        "resolution": resolution,
        "grid_points": grid_size(L.k, resolution),
        "found": cx is not None,
        "counterexample": formats.counterexample_to_json(cx),
    }


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        chunks = _execute(config)
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
                for chunk in chunks:
                    fh.write(chunk)
        else:
            for chunk in chunks:
                stdout.write(chunk)
        return EXIT_OK
    except UsageError as exc:
        print(f"modegap: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ParseError, DimensionMismatch) as exc:
        print(f"modegap: input error: {exc}", file=stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"modegap: cannot read input: {exc}", file=stderr)
        return EXIT_PARSE
    except NotReasonable as exc:
        print(f"modegap: unreasonable cost matrix: {exc}", file=stderr)
        return EXIT_UNREASONABLE
    except InvariantViolation as exc:
        print(f"modegap: internal invariant violated: {exc}", file=stderr)
        return EXIT_INTERNAL


def _execute(config: RunConfig) -> list[str]:
    # outputs are materialized before writing, so a failing run leaves no partial file
    L = formats.parse_matrix(config.matrix_path, config.matrix_format)
    cmd = config.subcommand

    if cmd in ("canonicalize", "certify", "oracle", "regions"):
        report = validate_reasonable(L)
        if not report.is_reasonable:
            raise NotReasonable(
                f"violations={report.violations}, has_strict={report.has_strict}"
            )

    if cmd == "canonicalize":
        return [formats.dumps(formats.matrix_to_json(canonicalize(L)))]
    if cmd == "certify":
        return [formats.dumps(formats.verdict_to_json(mode_is_bayes(L)))]
    if cmd == "oracle":
        resolution = config.resolution or default_resolution(L.k)
        if grid_size(L.k, resolution) > MAX_GRID_POINTS:
            raise UsageError(f"resolution {resolution} too large for k={L.k}")
        doc = _oracle_doc(L, resolution, config.threads)
        if doc["found"] and find_counterexample(L) is None:
            raise InvariantViolation("oracle found a witness the certifier missed")
        return [formats.dumps(doc)]
    if cmd == "regions":
        if L.k != 3:
            raise UsageError(f"regions needs a 3x3 matrix, got k={L.k}")
        C = canonicalize(L)
        return [render_svg([bayes_regions_ternary(C), disagreement_region(C)], show_grid=True)]

    vectors = formats.iter_probs(config.probs_path, config.renormalize, k=L.k)
    if cmd == "decide":
        return list(_decide_lines(L, vectors, config.seed))
    summary = summarize_regret(L, vectors, config.tie_policy)
    return [formats.dumps(summary.to_json(config.tie_policy))]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modegap", description="Mode vs Bayes decisions under cost matrices.")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--matrix", required=True, help="cost matrix file (CSV or JSON)")
    parser.add_argument("--probs", help="CSV of probability vectors, one per line")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--resolution", type=int, help="oracle grid resolution N")
    parser.add_argument("--renormalize", action="store_true",
                        help="rescale rows whose sum is within 1e-6 of 1")
    parser.add_argument("--tie-policy", choices=TIE_POLICIES, default="uniform")
    parser.add_argument("--threads", type=int, help="worker count (default: $MODEGAP_THREADS or 1)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("csv", "json"), dest="matrix_format",
                        help="matrix format (default: by file extension)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        threads = args.threads
        if threads is None:
            env = os.environ.get("MODEGAP_THREADS", "").strip()
            try:
                threads = int(env) if env else 1
            except ValueError:
                raise UsageError(f"MODEGAP_THREADS must be an integer, got {env!r}") from None
        config = RunConfig(
            subcommand=args.subcommand,
            matrix_path=args.matrix,
            probs_path=args.probs,
            output_path=args.out,
            resolution=args.resolution,
            renormalize=args.renormalize,
            tie_policy=args.tie_policy,
            threads=threads,
            seed=args.seed,
            matrix_format=args.matrix_format,
        )
    except UsageError as exc:
        print(f"modegap: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
