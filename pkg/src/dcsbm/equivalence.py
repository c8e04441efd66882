"""Gauge equivalence of parameter systems.

A relabeling of communities combined with positive per-community scaling
of degree parameters (compensated inside the connectivity matrix) leaves
the expected adjacency matrix unchanged.  This module applies such
transforms, reduces systems to a canonical representative, and decides
whether two systems are related by some transform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotPermutable
from .model import (
    CommunityAssignment,
    ConnectivityMatrix,
    DegreeParams,
    ParameterSystem,
    expected_adjacency,
    offdiag_project,
)
from .partitions import GaugeTransform, permutation_between

#: Default tolerance for deciding equivalence of two systems.
DEFAULT_EQUIV_TOL = 1e-8


def apply_transform(sys: ParameterSystem, g: GaugeTransform) -> ParameterSystem:
    """The system obtained by relabeling and rescaling ``sys`` with ``g``.

    Community k becomes ``g.perm[k-1]``, each node's degree parameter is
    divided by its community's scale factor, and B entries absorb the two
    scale factors so the expected adjacency matrix is preserved exactly.
    """
    if g.K != sys.K:
        raise ValueError(f"transform acts on {g.K} communities, system has {sys.K}")
    p = np.array(g.perm) - 1
    labels = p[sys.labels - 1] + 1
    theta = sys.thetas / g.scale[sys.labels - 1]
    # outer(scale, scale) keeps the scaled matrix bitwise symmetric
    scaled = np.outer(g.scale, g.scale) * sys.B
    B = np.empty_like(scaled)
    B[np.ix_(p, p)] = scaled
    return ParameterSystem(
        CommunityAssignment(labels, sys.K), DegreeParams(theta), ConnectivityMatrix(B)
    )


def canonicalize(sys: ParameterSystem) -> tuple[ParameterSystem, GaugeTransform]:
    """Reduce ``sys`` to its canonical gauge.

    Communities are renumbered in increasing order of their minimum member
    node, and the degree parameters are rescaled so that each community's
    minimum member carries theta exactly 1.0.  Returns the canonical
    system together with the transform that produced it; the map is
    idempotent (a canonical system maps to itself with the identity).
    """
    first_member = np.full(sys.K, sys.n + 1, dtype=int)
    for i, k in enumerate(sys.labels, start=1):
        if i < first_member[k - 1]:
            first_member[k - 1] = i
    order = np.argsort(first_member, kind="stable")
    perm = np.empty(sys.K, dtype=int)
    perm[order] = np.arange(1, sys.K + 1)
    scale = sys.thetas[first_member - 1]
    g = GaugeTransform(tuple(perm), scale)
    return apply_transform(sys, g), g


@dataclass(eq=False)
class EquivalenceResult:
    """Verdict of a gauge-equivalence test, with a witness when positive.

    ``reason`` names the first obstruction found on the negative side:
    "partition" (community structures differ as partitions of nodes),
    "theta" (degree parameters are not a per-community rescaling of each
    other), or "B" (connectivity matrices disagree after relabeling and
    rescaling).
    """

    equivalent: bool
    witness: GaugeTransform | None = None
    reason: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.equivalent


def equivalent(
    a: ParameterSystem, b: ParameterSystem, tol: float = DEFAULT_EQUIV_TOL
) -> EquivalenceResult:
    """Decide whether some gauge transform carries ``a`` onto ``b``.

    Entrywise agreement is judged against ``tol * (1 + magnitude)``.  On
    success the returned witness ``g`` satisfies
    ``apply_transform(a, g) ~ b`` within that tolerance.
    """
    if a.n != b.n:
        raise ValueError(f"node counts differ: {a.n} vs {b.n}")
    try:
        perm = permutation_between(a.z, b.z)
    except NotPermutable as exc:
        return EquivalenceResult(False, reason="partition", detail=str(exc))

    # Candidate scale factor per community, anchored at its first member.
    first = np.full(a.K, -1, dtype=int)
    for i, k in enumerate(a.labels):
        if first[k - 1] < 0:
            first[k - 1] = i
    scale = a.thetas[first] / b.thetas[first]
    if np.any(scale <= 0):
        bad = int(np.flatnonzero(scale <= 0)[0]) + 1
        return EquivalenceResult(
            False,
            reason="theta",
            detail=f"degree parameter ratio for community {bad} is not positive",
        )
    predicted = b.thetas * scale[a.labels - 1]
    err = np.abs(a.thetas - predicted)
    bound = tol * (1.0 + np.maximum(np.abs(a.thetas), np.abs(predicted)))
    if np.any(err > bound):
        i = int(np.argmax(err - bound)) + 1
        return EquivalenceResult(
            False,
            reason="theta",
            detail=(
                f"degree parameters are not community-wise proportional: node {i} "
                f"deviates by {err[i - 1]:.3e}"
            ),
        )

    g = GaugeTransform(perm, scale)
    transformed = apply_transform(a, g)
    diff = np.abs(transformed.B - b.B)
    bound = tol * (1.0 + np.maximum(np.abs(transformed.B), np.abs(b.B)))
    if np.any(diff > bound):
        k, l = np.unravel_index(int(np.argmax(diff - bound)), diff.shape)
        return EquivalenceResult(
            False,
            reason="B",
            detail=(
                f"connectivity entry ({k + 1}, {l + 1}) differs by {diff[k, l]:.3e} "
                "after relabeling and rescaling"
            ),
        )
    return EquivalenceResult(True, witness=g, detail="systems related by gauge transform")


def same_model_offdiag(a: ParameterSystem, b: ParameterSystem, tol: float = 0.0) -> bool:
    """Whether the two systems' expected matrices agree off the diagonal.

    The comparison is entrywise absolute: max-abs difference of the
    off-diagonal projections at most ``tol``.  The default demands exact
    agreement.
    """
    if a.n != b.n:
        raise ValueError(f"node counts differ: {a.n} vs {b.n}")
    da = offdiag_project(expected_adjacency(a))
    db = offdiag_project(expected_adjacency(b))
    return bool(np.abs(da.m - db.m).max() <= tol)
