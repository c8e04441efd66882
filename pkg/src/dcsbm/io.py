"""Serialization: parameter systems and partitions as JSON, matrices as CSV.

All floating-point output is written with 17 significant digits so that
values survive a text round trip bit for bit.  The standard json module
cannot be told to do that for plain floats, hence the small dumper here.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from .errors import EmptyInput, InvalidSystem
from .model import (
    ExpectedMatrix,
    MatrixKind,
    ParameterSystem,
    assignment_from_labels,
    ConnectivityMatrix,
    DegreeParams,
    validate_system,
)
from .partitions import GaugeTransform, Partition
from .recovery import RecoveryReport
from .sampler import SampleConfig


def _dump(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("non-finite numbers cannot be written as JSON")
        out.append(format(x, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for pos, (key, value) in enumerate(obj.items()):
            if pos:
                out.append(", ")
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            out.append(json.dumps(key))
            out.append(": ")
            _dump(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for pos, value in enumerate(obj):
            if pos:
                out.append(", ")
            _dump(value, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def json_dumps(obj) -> str:
    """Serialize to JSON with floats at 17 significant digits."""
    out: list[str] = []
    _dump(obj, out)
    return "".join(out)


def system_to_dict(sys: ParameterSystem) -> dict:
    return {
        "n": sys.n,
        "K": sys.K,
        "z": sys.labels,
        "theta": sys.thetas,
        "B": sys.B,
    }


def system_from_dict(doc: dict) -> tuple[ParameterSystem, dict]:
    """Parse a system document, remapping any non-contiguous labels.

    Returns the system and the recorded label mapping (identity when the
    stored labels were already 1..K).  Documents whose declared n, K
    disagree with the arrays, or whose parameters violate the model
    invariants, are rejected with InvalidSystem.
    """
    try:
        z_raw = list(doc["z"])
        theta = np.asarray(doc["theta"], dtype=float)
        B = np.asarray(doc["B"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise InvalidSystem(f"system document is missing or malformed: {exc}") from exc
    assignment, mapping = assignment_from_labels(z_raw)
    if "n" in doc and int(doc["n"]) != assignment.n:
        raise InvalidSystem(f"declared n={doc['n']} but z has {assignment.n} entries")
    if "K" in doc and int(doc["K"]) != assignment.K:
        raise InvalidSystem(
            f"declared K={doc['K']} but z uses {assignment.K} distinct labels"
        )
    sys = ParameterSystem(assignment, DegreeParams(theta), ConnectivityMatrix(B))
    report = validate_system(sys)
    if not report:
        raise InvalidSystem("; ".join(report.violations))
    return sys, mapping


def write_system(sys: ParameterSystem, path) -> None:
    Path(path).write_text(json_dumps(system_to_dict(sys)) + "\n")


def read_system(path) -> tuple[ParameterSystem, dict]:
    return system_from_dict(json.loads(Path(path).read_text()))


def partition_to_dict(p: Partition) -> dict:
    return {"n": p.n, "blocks": [list(b) for b in p.blocks]}


def partition_from_dict(doc: dict) -> Partition:
    return Partition(int(doc["n"]), tuple(tuple(b) for b in doc["blocks"]))


def transform_to_dict(g: GaugeTransform) -> dict:
    return {"perm": list(g.perm), "scale": g.scale}


def transform_from_dict(doc: dict) -> GaugeTransform:
    return GaugeTransform(tuple(doc["perm"]), np.asarray(doc["scale"], dtype=float))


def report_to_dict(report: RecoveryReport) -> dict:
    return {
        "system": system_to_dict(report.system),
        "residual": report.residual,
        "witness_counts": list(report.witness_counts),
        "theta_spread": list(report.theta_spread),
        "flags": list(report.flags),
    }


def write_matrix(delta: ExpectedMatrix, path) -> None:
    np.savetxt(path, delta.m, fmt="%.17g", delimiter=",")


def read_matrix(path, kind: MatrixKind) -> ExpectedMatrix:
    m = np.loadtxt(path, delimiter=",", ndmin=2)
    return ExpectedMatrix(m, kind)


def write_samples(samples, cfg: SampleConfig, out_dir) -> list[str]:
    """Write each sample as ``sample_%06d.csv`` plus a config.json sidecar."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for idx, sample in enumerate(samples):
        name = f"sample_{idx:06d}.csv"
        np.savetxt(out / name, sample, fmt="%.17g", delimiter=",")
        names.append(name)
    sidecar = {
        "distribution": cfg.distribution.value,
        "seed": cfg.seed,
        "count": cfg.count,
        "n": int(np.asarray(samples[0]).shape[0]) if len(samples) else 0,
    }
    (out / "config.json").write_text(json_dumps(sidecar) + "\n")
    return names


def read_samples(in_dir) -> np.ndarray:
    """Load every ``sample_*.csv`` in a directory, in filename order."""
    paths = sorted(Path(in_dir).glob("sample_*.csv"))
    if not paths:
        raise EmptyInput(f"no sample_*.csv files found in {os.fspath(in_dir)!r}")
    return np.stack([np.loadtxt(p, delimiter=",", ndmin=2) for p in paths])
