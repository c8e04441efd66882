"""Pairs of inequivalent parameter systems sharing all off-diagonal data.

Three canonical fixtures exhibit the three failure modes below the
minimum community size: a 3-node pair with different community
structures, a 4-node pair with size-2 communities and underdetermined
degree parameters, and a 3-node constant-degree pair whose expected
matrices differ only on the diagonal.  A constructor manufactures fresh
instances of the second kind, and a verifier checks the defining
properties of any claimed pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .equivalence import equivalent, same_model_offdiag
from .errors import PatternMismatch
from .model import ParameterSystem, system, validate_system


class AmbiguityKind(Enum):
    """Which identifiability failure a counterexample pair demonstrates."""

    STRUCTURE_AMBIGUITY = "structure-ambiguity"
    DEGREE_AMBIGUITY = "degree-ambiguity"
    SBM_SINGLETON = "sbm-singleton"


@dataclass(eq=False)
class CounterexamplePair:
    """Two systems with equal off-diagonal expected entries, yet inequivalent."""

    sys1: ParameterSystem
    sys2: ParameterSystem
    kind: AmbiguityKind


def _parse_system(z: str, theta: str, b: str) -> ParameterSystem:
    labels = np.array([int(t) for t in z.split()])
    thetas = np.array([float(t) for t in theta.split()])
    B = np.array([[float(t) for t in row.split()] for row in b.split(";")])
    return system(labels, thetas, B)


# Fixture entries kept as decimal strings so the stored numbers are the
# printed ones, parsed once rather than re-derived in floating point.
_FIXTURES = {
    1: (
        AmbiguityKind.STRUCTURE_AMBIGUITY,
        ("1 2 2", "2 2 2", "0.05 0.025; 0.025 0.05"),
        ("1 1 2", "1 2 4", "0.05 0.025; 0.025 0.05"),
    ),
    2: (
        AmbiguityKind.DEGREE_AMBIGUITY,
        ("1 1 2 2", "1 1 1 1", "0.1 0; 0 0.4"),
        ("1 1 2 2", "1 1 1 2", "0.1 0; 0 0.2"),
    ),
    3: (
        AmbiguityKind.SBM_SINGLETON,
        ("1 2 2", "1 1 1", "0.1 0; 0 0.1"),
        ("1 2 2", "1 1 1", "0.2 0; 0 0.1"),
    ),
}


def example_fixture(fixture_id: int) -> CounterexamplePair:
    """One of the three canonical counterexample pairs (ids 1, 2, 3).

    1: same off-diagonal data under two different community structures
       (3 nodes, minimum size 1 vs 2).
    2: same structure, size-2 communities with isolated connectivity rows;
       the degree split inside each community is free.
    3: constant-degree pair whose expected matrices agree everywhere off
       the diagonal but have different connectivity matrices.
    """
    if fixture_id not in _FIXTURES:
        raise ValueError(f"fixture id must be 1, 2 or 3, got {fixture_id!r}")
    kind, first, second = _FIXTURES[fixture_id]
    return CounterexamplePair(_parse_system(*first), _parse_system(*second), kind)


def construct_size2_counterexample(
    sys: ParameterSystem, k: int, c: float
) -> CounterexamplePair:
    """Manufacture a degree-ambiguous twin of ``sys`` at community ``k``.

    Requires community k to have exactly two members and a connectivity
    row that vanishes off the diagonal (so no third node ever witnesses
    the ratio of the two members' degree parameters).  The twin multiplies
    the larger member's degree parameter by ``c`` and divides the
    community's self-connectivity by ``c``; every off-diagonal expected
    entry is unchanged while the systems remain inequivalent.
    """
    if not 1 <= k <= sys.K:
        raise ValueError(f"community index {k} out of range 1..{sys.K}")
    if not c > 0 or c == 1:
        raise ValueError(f"scale must be positive and different from 1, got {c!r}")
    members = np.flatnonzero(sys.labels == k) + 1
    if members.size != 2:
        raise PatternMismatch(
            f"community {k} has {members.size} members, need exactly 2"
        )
    row = sys.B[k - 1]
    off_block = np.delete(row, k - 1)
    if np.any(off_block != 0.0):
        raise PatternMismatch(
            f"community {k} has a nonzero cross-community connectivity entry; "
            "its degree split is determined and this construction does not apply"
        )
    if row[k - 1] == 0.0:
        raise PatternMismatch(f"connectivity row {k} is identically zero")

    j = int(members[1])
    theta = sys.thetas.copy()
    theta[j - 1] = c * theta[j - 1]
    B = sys.B.copy()
    B[k - 1, k - 1] = B[k - 1, k - 1] / c
    twin = system(sys.labels.copy(), theta, B)

    assert validate_system(twin), "constructed twin fails validation"
    assert same_model_offdiag(sys, twin, tol=1e-12), "off-diagonal entries moved"
    verdict = equivalent(sys, twin)
    assert not verdict and verdict.reason == "theta", "twin is not degree-ambiguous"
    return CounterexamplePair(sys, twin, AmbiguityKind.DEGREE_AMBIGUITY)


@dataclass
class CounterexampleReport:
    """Outcome of checking a pair's defining properties.

    ``b_differs`` is only meaningful for the constant-degree kind, where
    the connectivity matrices themselves must disagree somewhere; it is
    None otherwise.
    """

    both_valid: bool
    same_offdiag: bool
    not_equivalent: bool
    b_differs: bool | None = None

    @property
    def passed(self) -> bool:
        checks = [self.both_valid, self.same_offdiag, self.not_equivalent]
        if self.b_differs is not None:
            checks.append(self.b_differs)
        return all(checks)

    def __bool__(self) -> bool:
        return self.passed


def verify_counterexample(
    pair: CounterexamplePair, tol: float = 1e-12
) -> CounterexampleReport:
    """Check the defining properties of a counterexample pair.

    Both systems must validate, share off-diagonal expected entries within
    ``tol`` (absolute), and fail the equivalence test.  Reports rather
    than raises, so failed checks are inspectable.
    """
    both_valid = bool(validate_system(pair.sys1)) and bool(validate_system(pair.sys2))
    same = same_model_offdiag(pair.sys1, pair.sys2, tol=tol)
    try:
        inequivalent = not equivalent(pair.sys1, pair.sys2)
    except ValueError:
        inequivalent = False
    b_differs = None
    if pair.kind is AmbiguityKind.SBM_SINGLETON:
        b_differs = bool(np.any(pair.sys1.B != pair.sys2.B))
    return CounterexampleReport(both_valid, same, inequivalent, b_differs)
