"""Exception types shared across the package."""


class DcsbmError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSystem(DcsbmError):
    """A parameter system violates a structural invariant."""


class InvalidMatrix(DcsbmError):
    """A matrix does not satisfy the required storage invariants."""


class InvalidTransform(DcsbmError):
    """A gauge transform is malformed (bad permutation or non-positive scale)."""


class NotPermutable(DcsbmError):
    """Two community assignments induce different partitions."""


class ZeroRow(DcsbmError):
    """A row has (numerically) zero norm where a nonzero row is required."""


class TooSmall(DcsbmError):
    """The matrix is too small for the requested analysis (n < 4)."""


class RankMismatch(DcsbmError):
    """Numerical rank of the input differs from the requested community count."""


class ClusterCountMismatch(DcsbmError):
    """Row clustering produced a different number of blocks than expected."""


class NonIdentifiable(DcsbmError):
    """The off-diagonal data do not determine the parameters.

    Carries the diagnostics gathered before the failure was detected:
    ``witness_counts`` (per node, 1-based node order), the recovered
    ``partition``, and the 1-based ``nodes`` whose degree parameters are
    underdetermined.
    """

    def __init__(self, message, witness_counts=None, partition=None, nodes=None):
        super().__init__(message)
        self.witness_counts = list(witness_counts) if witness_counts is not None else []
        self.partition = partition
        self.nodes = list(nodes) if nodes is not None else []


class PatternMismatch(DcsbmError):
    """The system does not have the connectivity pattern the operation needs."""


class RangeError(DcsbmError):
    """An expected-matrix entry is outside the sampling distribution's domain."""


class EmptyInput(DcsbmError):
    """An operation that needs at least one element received none."""
