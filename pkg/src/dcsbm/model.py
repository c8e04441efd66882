"""Core model types, expected-matrix construction, and structural validation.

A degree-corrected stochastic block model on ``n`` nodes with ``K``
communities is parametrized by a triple: a community assignment ``z``
(1-based labels), strictly positive per-node degree parameters ``theta``,
and a symmetric full-rank ``K x K`` connectivity matrix ``B``.  The model's
mean adjacency matrix has entries ``theta[i] * theta[j] * B[z_i, z_j]``.

Connectivity entries may be any reals (negative or above 1); range
restrictions are enforced only by the Bernoulli/Poisson samplers, not here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidMatrix, InvalidSystem

#: Default threshold for judging numerical rank: a singular value counts as
#: nonzero iff it exceeds ``rank_tol`` times the largest singular value.
DEFAULT_RANK_TOL = 1e-10


@dataclass(eq=False)
class CommunityAssignment:
    """Node-to-community labels, 1-based and contiguous in ``1..K``.

    Labels must lie in ``1..K`` (enforced at construction, since everything
    downstream indexes with them).  Coverage, i.e. every community having at
    least one member, is reported by :func:`validate_system` rather than
    raised here, so that defective systems can still be inspected.
    """

    labels: np.ndarray
    K: int

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=int)
        self.K = int(self.K)
        if self.labels.ndim != 1 or self.labels.size == 0:
            raise InvalidSystem("labels must be a nonempty 1-d sequence")
        if self.K < 1:
            raise InvalidSystem("community count K must be a positive integer")
        if self.labels.min() < 1 or self.labels.max() > self.K:
            raise InvalidSystem(
                f"labels must lie in 1..{self.K}, got range "
                f"[{self.labels.min()}, {self.labels.max()}]"
            )

    @property
    def n(self) -> int:
        return int(self.labels.size)

    def membership_matrix(self) -> np.ndarray:
        """The n x K one-hot matrix with a single 1 per row."""
        Z = np.zeros((self.n, self.K))
        Z[np.arange(self.n), self.labels - 1] = 1.0
        return Z


def assignment_from_labels(raw_labels) -> tuple[CommunityAssignment, dict]:
    """Build an assignment from an arbitrary label alphabet.

    Distinct raw labels are remapped to contiguous 1..K in order of first
    appearance.  Returns the assignment together with the recorded mapping
    ``{original_label: new_label}``; the mapping is the identity when the
    input is already contiguous 1-based.
    """
    raw = list(raw_labels)
    if not raw:
        raise InvalidSystem("labels must be a nonempty sequence")
    mapping: dict = {}
    for lab in raw:
        if lab not in mapping:
            mapping[lab] = len(mapping) + 1
    K = len(mapping)
    if set(mapping) == set(range(1, K + 1)):
        mapping = {k: k for k in range(1, K + 1)}
    labels = np.array([mapping[lab] for lab in raw], dtype=int)
    return CommunityAssignment(labels, K), mapping


@dataclass(eq=False)
class DegreeParams:
    """Per-node degree parameters; valid systems have every entry > 0."""

    theta: np.ndarray

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        if self.theta.ndim != 1 or self.theta.size == 0:
            raise InvalidSystem("theta must be a nonempty 1-d sequence")

    @property
    def n(self) -> int:
        return int(self.theta.size)


@dataclass(eq=False)
class ConnectivityMatrix:
    """K x K connectivity intensities; valid systems are symmetric full rank."""

    B: np.ndarray

    def __post_init__(self):
        self.B = np.asarray(self.B, dtype=float)
        if self.B.ndim != 2 or self.B.shape[0] != self.B.shape[1] or self.B.size == 0:
            raise InvalidSystem("B must be a nonempty square matrix")

    @property
    def K(self) -> int:
        return int(self.B.shape[0])


@dataclass(eq=False)
class ParameterSystem:
    """The model triple (assignment, degree parameters, connectivity)."""

    z: CommunityAssignment
    theta: DegreeParams
    b: ConnectivityMatrix

    def __post_init__(self):
        if self.theta.n != self.z.n:
            raise InvalidSystem(
                f"dimension mismatch: {self.theta.n} degree parameters for {self.z.n} nodes"
            )
        if self.b.K != self.z.K:
            raise InvalidSystem(
                f"dimension mismatch: B is {self.b.K}x{self.b.K} but K = {self.z.K}"
            )

    @property
    def n(self) -> int:
        return self.z.n

    @property
    def K(self) -> int:
        return self.z.K

    @property
    def labels(self) -> np.ndarray:
        return self.z.labels

    @property
    def thetas(self) -> np.ndarray:
        return self.theta.theta

    @property
    def B(self) -> np.ndarray:
        return self.b.B


def system(labels, theta, B) -> ParameterSystem:
    """Convenience constructor from raw arrays (labels must be 1..K)."""
    labels = np.asarray(labels, dtype=int)
    K = int(labels.max()) if labels.size else 0
    return ParameterSystem(
        CommunityAssignment(labels, K), DegreeParams(theta), ConnectivityMatrix(B)
    )


class MatrixKind(Enum):
    """Whether an expected matrix carries its diagonal or has it deleted."""

    FULL = "full"
    OFFDIAG = "offdiag"


@dataclass(eq=False)
class ExpectedMatrix:
    """A dense symmetric expected adjacency matrix.

    ``kind`` distinguishes the full matrix from its diagonal-deleted
    projection.  Symmetry is required to hold exactly in storage, and
    OFFDIAG matrices must have an exactly zero diagonal; both are checked at
    construction.
    """

    m: np.ndarray
    kind: MatrixKind

    def __post_init__(self):
        self.m = np.asarray(self.m, dtype=float)
        if self.m.ndim != 2 or self.m.shape[0] != self.m.shape[1] or self.m.size == 0:
            raise InvalidMatrix("expected matrix must be a nonempty square matrix")
        if not np.array_equal(self.m, self.m.T):
            raise InvalidMatrix("expected matrix must be exactly symmetric")
        if self.kind is MatrixKind.OFFDIAG and np.any(self.m.diagonal() != 0.0):
            raise InvalidMatrix("diagonal-deleted matrix must have an exactly zero diagonal")

    @property
    def n(self) -> int:
        return int(self.m.shape[0])


def expected_adjacency(sys: ParameterSystem) -> ExpectedMatrix:
    """Mean adjacency matrix of the model, including diagonal entries.

    Entry (i, j) is ``theta[i] * theta[j] * B[z_i, z_j]``.  The result is
    exactly symmetric in storage because the theta outer product commutes
    and B is stored symmetric.
    """
    idx = sys.labels - 1
    m = np.outer(sys.thetas, sys.thetas) * sys.B[np.ix_(idx, idx)]
    return ExpectedMatrix(m, MatrixKind.FULL)


def offdiag_project(delta: ExpectedMatrix) -> ExpectedMatrix:
    """Zero the diagonal, keeping off-diagonal entries bit-for-bit.

    This is the projection onto matrices with zero diagonal: linear, and
    idempotent (projecting an OFFDIAG matrix returns an equal matrix).
    """
    m = delta.m.copy()
    np.fill_diagonal(m, 0.0)
    return ExpectedMatrix(m, MatrixKind.OFFDIAG)


def community_sizes(z: CommunityAssignment) -> np.ndarray:
    """Member count of each community, indexed by community (length K)."""
    return np.bincount(z.labels, minlength=z.K + 1)[1:]


def check_min_size(z: CommunityAssignment, threshold: int) -> bool:
    """True iff every community has at least ``threshold`` members.

    ``threshold=3`` is the size condition under which the full parameter
    system is identifiable from off-diagonal data; ``threshold=2`` suffices
    for the community structure alone.
    """
    if threshold < 1:
        raise ValueError("threshold must be a positive integer")
    return bool(community_sizes(z).min() >= threshold)


@dataclass
class ValidationReport:
    """Outcome of :func:`validate_system`: valid iff no violations."""

    valid: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def validate_system(sys: ParameterSystem, rank_tol: float = DEFAULT_RANK_TOL) -> ValidationReport:
    """Report every violated model invariant instead of raising.

    Checks theta positivity, exact symmetry of B, full rank of B (smallest
    singular value must exceed ``rank_tol`` times the largest), and label
    coverage (every community inhabited).
    """
    violations = []
    theta = sys.thetas
    if not np.all(theta > 0):
        bad = np.flatnonzero(~(theta > 0)) + 1
        violations.append(
            "degree parameter must be positive (violated at node"
            + ("s " if bad.size > 1 else " ")
            + ", ".join(str(i) for i in bad)
            + ")"
        )
    B = sys.B
    if not np.array_equal(B, B.T):
        violations.append("B must be symmetric")
    else:
        svals = np.linalg.svd(B, compute_uv=False)
        if svals[0] == 0.0 or svals[-1] <= rank_tol * svals[0]:
            violations.append(
                f"B rank deficient (smallest/largest singular value = "
                f"{svals[-1]:.3e}/{svals[0]:.3e}, rank_tol = {rank_tol:g})"
            )
    sizes = community_sizes(sys.z)
    if sizes.min() < 1:
        empty = ", ".join(str(k) for k in np.flatnonzero(sizes < 1) + 1)
        violations.append(f"label coverage violated: no members in community {empty}")
    return ValidationReport(valid=not violations, violations=violations)
