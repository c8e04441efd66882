"""Identifiability toolkit for degree-corrected stochastic block models.

Builds expected adjacency matrices from model parameters, tests when two
parameter systems describe the same model (gauge equivalence under
community relabeling and degree rescaling), recovers parameters from
full or diagonal-deleted expected matrices, houses the canonical
counterexamples where recovery is impossible, and samples random graphs
with a prescribed mean structure.
"""

from .errors import (
    ClusterCountMismatch,
    DcsbmError,
    EmptyInput,
    InvalidMatrix,
    InvalidSystem,
    InvalidTransform,
    NonIdentifiable,
    NotPermutable,
    PatternMismatch,
    RangeError,
    RankMismatch,
    TooSmall,
    ZeroRow,
)
from .model import (
    DEFAULT_RANK_TOL,
    CommunityAssignment,
    ConnectivityMatrix,
    DegreeParams,
    ExpectedMatrix,
    MatrixKind,
    ParameterSystem,
    ValidationReport,
    assignment_from_labels,
    check_min_size,
    community_sizes,
    expected_adjacency,
    offdiag_project,
    system,
    validate_system,
)
from .partitions import (
    DEFAULT_PARTITION_TOL,
    GaugeTransform,
    Partition,
    UnionFind,
    membership_from_partition,
    partition_from_labels,
    permutation_between,
    row_equivalence_partition,
    row_proportional_partition,
)
from .equivalence import (
    DEFAULT_EQUIV_TOL,
    EquivalenceResult,
    apply_transform,
    canonicalize,
    equivalent,
    same_model_offdiag,
)
from .recovery import (
    RecoveryReport,
    SpectralDecomposition,
    completion_residual,
    lowrank_complete,
    offdiag_partition,
    offdiag_recover,
    reconstruct_diagonal,
    spectral_decomposition,
    spectral_recover,
)
from .counterexamples import (
    AmbiguityKind,
    CounterexamplePair,
    CounterexampleReport,
    construct_size2_counterexample,
    example_fixture,
    verify_counterexample,
)
from .sampler import Distribution, SampleConfig, empirical_mean, sample_adjacency

__version__ = "0.1.0"

__all__ = [
    "AmbiguityKind",
    "ClusterCountMismatch",
    "CommunityAssignment",
    "ConnectivityMatrix",
    "CounterexamplePair",
    "CounterexampleReport",
    "DEFAULT_EQUIV_TOL",
    "DEFAULT_PARTITION_TOL",
    "DEFAULT_RANK_TOL",
    "DcsbmError",
    "DegreeParams",
    "Distribution",
    "EmptyInput",
    "EquivalenceResult",
    "ExpectedMatrix",
    "GaugeTransform",
    "InvalidMatrix",
    "InvalidSystem",
    "InvalidTransform",
    "MatrixKind",
    "NonIdentifiable",
    "NotPermutable",
    "ParameterSystem",
    "Partition",
    "PatternMismatch",
    "RangeError",
    "RankMismatch",
    "RecoveryReport",
    "SampleConfig",
    "SpectralDecomposition",
    "TooSmall",
    "UnionFind",
    "ValidationReport",
    "ZeroRow",
    "apply_transform",
    "assignment_from_labels",
    "canonicalize",
    "check_min_size",
    "community_sizes",
    "completion_residual",
    "construct_size2_counterexample",
    "empirical_mean",
    "equivalent",
    "example_fixture",
    "expected_adjacency",
    "lowrank_complete",
    "membership_from_partition",
    "offdiag_partition",
    "offdiag_project",
    "offdiag_recover",
    "partition_from_labels",
    "permutation_between",
    "reconstruct_diagonal",
    "row_equivalence_partition",
    "row_proportional_partition",
    "same_model_offdiag",
    "sample_adjacency",
    "spectral_decomposition",
    "spectral_recover",
    "system",
    "validate_system",
    "verify_counterexample",
]
