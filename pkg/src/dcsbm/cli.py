"""Command-line front end.

Every subcommand prints a single JSON document to stdout and exits with
0 (success), 1 (a negative verdict: systems not equivalent, parameters
not identifiable, off-diagonals differ), or 2 (usage or validation
errors, including inputs that violate an algorithm's preconditions).
Numeric output carries 17 significant digits.
"""

from __future__ import annotations

import argparse
import re
import sys as _sys
from dataclasses import dataclass

import numpy as np

from . import io
from .counterexamples import construct_size2_counterexample, example_fixture, verify_counterexample
from .equivalence import DEFAULT_EQUIV_TOL, canonicalize, equivalent, same_model_offdiag
from .errors import DcsbmError, NonIdentifiable
from .model import (
    DEFAULT_RANK_TOL,
    MatrixKind,
    expected_adjacency,
    offdiag_project,
)
from .partitions import DEFAULT_PARTITION_TOL
from .recovery import lowrank_complete, offdiag_partition, offdiag_recover, spectral_recover
from .sampler import Distribution, SampleConfig, empirical_mean, sample_adjacency


@dataclass
class CommandOutcome:
    exit_code: int
    payload: dict


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _error_slug(exc: Exception) -> str:
    name = type(exc).__name__
    parts = re.sub(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])", "-", name)
    return parts.lower()


def _load_system(path: str) -> tuple:
    sys_, mapping = io.read_system(path)
    remapped = {str(k): v for k, v in mapping.items() if k != v}
    return sys_, remapped


def _cmd_build(args) -> tuple[dict, int]:
    sys_, remapped = _load_system(args.system)
    delta = expected_adjacency(sys_)
    if args.offdiag:
        delta = offdiag_project(delta)
    io.write_matrix(delta, args.out)
    payload = {"out": args.out, "n": delta.n, "kind": delta.kind.value}
    if remapped:
        payload["label_mapping"] = remapped
    return payload, 0


def _cmd_project(args) -> tuple[dict, int]:
    delta = io.read_matrix(args.matrix, MatrixKind.FULL)
    projected = offdiag_project(delta)
    io.write_matrix(projected, args.out)
    return {"out": args.out, "n": projected.n, "kind": projected.kind.value}, 0


def _cmd_recover(args) -> tuple[dict, int]:
    if args.source == "full":
        if args.k is None:
            raise _UsageError("--k is required with --from full")
        delta = io.read_matrix(args.matrix, MatrixKind.FULL)
        report = spectral_recover(delta, args.k, tol=args.tol, rank_tol=args.rank_tol)
    else:
        delta = io.read_matrix(args.matrix, MatrixKind.OFFDIAG)
        report = offdiag_recover(delta, tol=args.tol)
    return io.report_to_dict(report), 0


def _cmd_partition(args) -> tuple[dict, int]:
    delta = io.read_matrix(args.matrix, MatrixKind.OFFDIAG)
    part = offdiag_partition(delta, tol=args.tol)
    return io.partition_to_dict(part), 0


def _cmd_equiv(args) -> tuple[dict, int]:
    sys_a, _ = _load_system(args.a)
    sys_b, _ = _load_system(args.b)
    verdict = equivalent(sys_a, sys_b, tol=args.tol)
    if verdict:
        return {
            "equivalent": True,
            "witness": io.transform_to_dict(verdict.witness),
            "detail": verdict.detail,
        }, 0
    return {"equivalent": False, "reason": verdict.reason, "detail": verdict.detail}, 1


def _cmd_same_offdiag(args) -> tuple[dict, int]:
    sys_a, _ = _load_system(args.a)
    sys_b, _ = _load_system(args.b)
    da = offdiag_project(expected_adjacency(sys_a)).m
    db = offdiag_project(expected_adjacency(sys_b)).m
    same = same_model_offdiag(sys_a, sys_b, tol=args.tol)
    payload = {"same_offdiag": same, "max_abs_diff": float(np.abs(da - db).max())}
    return payload, 0 if same else 1


def _cmd_canon(args) -> tuple[dict, int]:
    sys_, remapped = _load_system(args.system)
    canonical, transform = canonicalize(sys_)
    payload = {
        "system": io.system_to_dict(canonical),
        "transform": io.transform_to_dict(transform),
    }
    if remapped:
        payload["label_mapping"] = remapped
    return payload, 0


def _cmd_counterexample(args) -> tuple[dict, int]:
    if args.example is not None:
        pair = example_fixture(args.example)
    else:
        if not args.construct:
            raise _UsageError("one of --example or --construct is required")
        if args.system is None or args.community is None or args.scale is None:
            raise _UsageError(
                "--construct requires --system, --community and --scale"
            )
        sys_, _ = _load_system(args.system)
        pair = construct_size2_counterexample(sys_, args.community, args.scale)
    report = verify_counterexample(pair, tol=args.tol)
    payload = {
        "kind": pair.kind.value,
        "sys1": io.system_to_dict(pair.sys1),
        "sys2": io.system_to_dict(pair.sys2),
        "report": {
            "both_valid": report.both_valid,
            "same_offdiag": report.same_offdiag,
            "not_equivalent": report.not_equivalent,
            "b_differs": report.b_differs,
            "passed": report.passed,
        },
    }
    return payload, 0 if report.passed else 1


def _cmd_complete(args) -> tuple[dict, int]:
    delta = io.read_matrix(args.matrix, MatrixKind.OFFDIAG)
    completed, iterations, converged = lowrank_complete(
        delta, args.k, max_iter=args.max_iter, conv_tol=args.conv_tol
    )
    payload = {
        "matrix": completed.m,
        "kind": completed.kind.value,
        "iterations": iterations,
        "converged": converged,
    }
    if args.out:
        io.write_matrix(completed, args.out)
        payload["out"] = args.out
    return payload, 0


def _cmd_sample(args) -> tuple[dict, int]:
    sys_, _ = _load_system(args.system)
    cfg = SampleConfig(Distribution(args.dist), args.seed, args.count)
    samples = sample_adjacency(sys_, cfg)
    names = io.write_samples(samples, cfg, args.out_dir)
    return {
        "out_dir": args.out_dir,
        "files": len(names),
        "distribution": cfg.distribution.value,
        "seed": cfg.seed,
        "count": cfg.count,
    }, 0


def _cmd_mean(args) -> tuple[dict, int]:
    samples = io.read_samples(args.in_dir)
    mean = empirical_mean(samples)
    io.write_matrix(mean, args.out)
    return {"out": args.out, "n": mean.n, "count": int(samples.shape[0])}, 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="dcsbm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="expected matrix of a system, written as CSV")
    p.add_argument("--system", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--offdiag", action="store_true", help="delete the diagonal")
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("project", help="zero the diagonal of a full matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_project)

    p = sub.add_parser("recover", help="read parameters back from a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--from", dest="source", choices=["full", "offdiag"], required=True)
    p.add_argument("--k", type=int, default=None, help="rank, required for --from full")
    p.add_argument("--tol", type=float, default=DEFAULT_PARTITION_TOL)
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    p.set_defaults(handler=_cmd_recover)

    p = sub.add_parser("partition", help="community partition from an off-diagonal matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_PARTITION_TOL)
    p.set_defaults(handler=_cmd_partition)

    p = sub.add_parser("equiv", help="test two systems for gauge equivalence")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_EQUIV_TOL)
    p.set_defaults(handler=_cmd_equiv)

    p = sub.add_parser("same-offdiag", help="compare off-diagonal expected entries")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--tol", type=float, default=0.0)
    p.set_defaults(handler=_cmd_same_offdiag)

    p = sub.add_parser("canon", help="canonical gauge of a system")
    p.add_argument("--system", required=True)
    p.set_defaults(handler=_cmd_canon)

    p = sub.add_parser("counterexample", help="fixture pairs and constructed twins")
    p.add_argument("--example", type=int, choices=[1, 2, 3], default=None)
    p.add_argument("--construct", action="store_true")
    p.add_argument("--system", default=None)
    p.add_argument("--community", type=int, default=None)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(handler=_cmd_counterexample)

    p = sub.add_parser("complete", help="fill a deleted diagonal against a rank bound")
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--conv-tol", type=float, default=1e-10)
    p.add_argument("--out", default=None, help="optionally write the completed matrix")
    p.set_defaults(handler=_cmd_complete)

    p = sub.add_parser("sample", help="draw adjacency samples into a directory")
    p.add_argument("--system", required=True)
    p.add_argument("--dist", choices=[d.value for d in Distribution], required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("mean", help="entrywise mean of sampled matrices")
    p.add_argument("--in-dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_mean)

    return parser


def run(argv=None) -> CommandOutcome:
    """Parse and execute one command, returning its outcome unprinted."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        payload, code = args.handler(args)
        return CommandOutcome(code, payload)
    except _UsageError as exc:
        return CommandOutcome(2, {"error": "usage", "detail": str(exc)})
    except NonIdentifiable as exc:
        payload = {
            "error": "non-identifiable",
            "detail": str(exc),
            "witness_counts": list(exc.witness_counts),
        }
        if exc.partition is not None:
            payload["partition"] = io.partition_to_dict(exc.partition)
        return CommandOutcome(1, payload)
    except (DcsbmError, ValueError, OSError) as exc:
        return CommandOutcome(2, {"error": _error_slug(exc), "detail": str(exc)})


def entrypoint() -> None:
    outcome = run()
    print(io.json_dumps(outcome.payload))
    _sys.exit(outcome.exit_code)
