"""Partitions of node indices induced by row equivalence relations.

Two notions are provided: plain row equivalence (rows identical up to a
tolerance) and row proportional equivalence (rows equal up to a positive
scalar factor).  With tolerances, pairwise agreement need not be
transitive, so both are closed into a well-defined partition with
union-find over all passing pairs.

Tolerance convention: a pair of rows passes the plain comparison when their
max-abs difference is at most ``tol * (1 + m)`` where ``m`` is the larger
of the two rows' max-abs magnitudes; proportional comparison normalizes
each row to unit 2-norm by a positive scalar and compares entrywise
against ``tol`` directly.  ``tol = 0`` reproduces exact grouping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidTransform, NotPermutable, ZeroRow
from .model import CommunityAssignment

#: Default tolerance for the partition-building comparisons.
DEFAULT_PARTITION_TOL = 1e-9

# Pairwise row comparisons are chunked to bound peak memory at large n.
_CHUNK = 256


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by size."""

    def __init__(self, n: int):
        self._parent = list(range(n))
        self._size = [1] * n

    def find(self, a: int) -> int:
        root = a
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[a] != root:
            self._parent[a], a = root, self._parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]

    def groups(self) -> list[list[int]]:
        by_root: dict[int, list[int]] = {}
        for i in range(len(self._parent)):
            by_root.setdefault(self.find(i), []).append(i)
        return list(by_root.values())


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks of 1-based indices covering ``1..n``.

    Blocks are stored in canonical order: each block sorted ascending, and
    blocks ordered by their minimum element.  Equality and hashing follow
    the canonical form.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        blocks = tuple(sorted(blocks, key=lambda b: b[0] if b else -1))
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "n", int(self.n))
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise ValueError("partition blocks must be nonempty")
            if seen.intersection(b):
                raise ValueError("partition blocks must be disjoint")
            seen.update(b)
        if seen != set(range(1, self.n + 1)):
            raise ValueError(f"blocks must cover 1..{self.n} exactly")

    def __len__(self) -> int:
        return len(self.blocks)

    def block_index(self) -> np.ndarray:
        """1-based block label per node, blocks numbered in canonical order."""
        labels = np.zeros(self.n, dtype=int)
        for k, block in enumerate(self.blocks, start=1):
            labels[np.array(block) - 1] = k
        return labels


def partition_from_labels(labels) -> Partition:
    """Group 1-based node indices by equal label values."""
    labels = np.asarray(labels)
    by_label: dict = {}
    for i, lab in enumerate(labels, start=1):
        by_label.setdefault(lab.item() if hasattr(lab, "item") else lab, []).append(i)
    return Partition(len(labels), tuple(tuple(b) for b in by_label.values()))


def membership_from_partition(p: Partition) -> CommunityAssignment:
    """Canonical community assignment of a partition.

    Community ``k`` is the k-th block in canonical order, so the block
    containing node 1 becomes community 1.  Round-trips with
    :func:`partition_from_labels`.
    """
    return CommunityAssignment(p.block_index(), len(p))


def _partition_from_pairs(n: int, pairs) -> Partition:
    uf = UnionFind(n)
    for i, j in pairs:
        uf.union(i, j)
    return Partition(n, tuple(tuple(i + 1 for i in g) for g in uf.groups()))


def _as_rows(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] < 1:
        raise ValueError("expected a 2-d matrix with at least one row")
    return M


def row_equivalence_partition(M, tol: float = DEFAULT_PARTITION_TOL) -> Partition:
    """Partition row indices by (tolerant) row identity.

    Rows i and j land in one block iff ``max|M_i - M_j| <= tol * (1 + m_ij)``
    with ``m_ij`` the larger max-abs magnitude of the two rows, closed
    transitively.  ``tol = 0`` groups exactly identical rows.
    """
    M = _as_rows(M)
    n = M.shape[0]
    mags = np.abs(M).max(axis=1) if M.shape[1] else np.zeros(n)
    pairs = []
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        # dist[a, j] = max-abs difference between rows lo+a and j
        dist = np.abs(M[lo:hi, None, :] - M[None, :, :]).max(axis=2)
        thresh = tol * (1.0 + np.maximum(mags[lo:hi, None], mags[None, :]))
        ai, j = np.nonzero(dist <= thresh)
        for a, b in zip(ai, j):
            if lo + a < b:
                pairs.append((lo + a, b))
    return _partition_from_pairs(n, pairs)


def row_proportional_partition(
    M, tol: float = DEFAULT_PARTITION_TOL
) -> tuple[Partition, np.ndarray]:
    """Partition row indices by positive-scalar proportionality.

    Each row is scaled to unit 2-norm by a positive factor; rows whose
    scaled versions agree entrywise within ``tol`` are merged (union-find
    closure).  A negative proportionality factor therefore does NOT merge.
    Returns the partition together with the row norms, whose within-block
    ratios are the proportionality factors between the original rows.

    Raises ZeroRow if any row has norm <= tol.
    """
    M = _as_rows(M)
    n = M.shape[0]
    norms = np.linalg.norm(M, axis=1)
    if np.any(norms <= tol):
        bad = int(np.flatnonzero(norms <= tol)[0]) + 1
        raise ZeroRow(f"row {bad} has norm {norms[bad - 1]:.3e} <= tol {tol:g}")
    U = M / norms[:, None]
    pairs = []
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        dist = np.abs(U[lo:hi, None, :] - U[None, :, :]).max(axis=2)
        ai, j = np.nonzero(dist <= tol)
        for a, b in zip(ai, j):
            if lo + a < b:
                pairs.append((lo + a, b))
    return _partition_from_pairs(n, pairs), norms


def permutation_between(z1: CommunityAssignment, z2: CommunityAssignment) -> tuple[int, ...]:
    """Relabeling taking ``z1`` to ``z2``, if the partitions coincide.

    Returns the permutation as a tuple with the image of community k at
    position k-1 (1-based values), i.e. ``z2_i = perm[z1_i - 1]`` for all i.
    Raises NotPermutable when the induced partitions differ.
    """
    if z1.n != z2.n:
        raise ValueError(f"node counts differ: {z1.n} vs {z2.n}")
    if z1.K != z2.K:
        raise NotPermutable(f"community counts differ: {z1.K} vs {z2.K}")
    K = z1.K
    image = [0] * K
    for a, b in zip(z1.labels, z2.labels):
        if image[a - 1] == 0:
            image[a - 1] = int(b)
        elif image[a - 1] != b:
            raise NotPermutable(
                f"community {a} is split across communities {image[a - 1]} and {b}"
            )
    if sorted(image) != list(range(1, K + 1)):
        raise NotPermutable("assignments merge communities differently")
    return tuple(image)


@dataclass(eq=False)
class GaugeTransform:
    """A community relabeling plus positive per-community scaling.

    ``perm`` holds the image of community k at position k-1 (1-based), and
    ``scale`` the positive factor attached to each original community.
    Applying the transform relabels community k to ``perm[k-1]``, divides
    the degree parameter of every node in community k by ``scale[k-1]``,
    and multiplies B entry (k, l) by ``scale[k-1] * scale[l-1]``; the
    model's expected matrix is unchanged.
    """

    perm: tuple[int, ...]
    scale: np.ndarray

    def __post_init__(self):
        self.perm = tuple(int(p) for p in self.perm)
        self.scale = np.asarray(self.scale, dtype=float)
        K = len(self.perm)
        if self.scale.shape != (K,):
            raise InvalidTransform(
                f"permutation has {K} entries but scale has shape {self.scale.shape}"
            )
        if sorted(self.perm) != list(range(1, K + 1)):
            raise InvalidTransform(f"perm must be a bijection on 1..{K}, got {self.perm}")
        if not np.all(self.scale > 0):
            raise InvalidTransform("scale factors must be strictly positive")

    @property
    def K(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, K: int) -> "GaugeTransform":
        return cls(tuple(range(1, K + 1)), np.ones(K))

    def permutation_matrix(self) -> np.ndarray:
        """The K x K matrix P with ``P[k, perm(k)] = 1``."""
        P = np.zeros((self.K, self.K))
        P[np.arange(self.K), np.array(self.perm) - 1] = 1.0
        return P

    def inverse(self) -> "GaugeTransform":
        perm = [0] * self.K
        scale = np.empty(self.K)
        for k, image in enumerate(self.perm):
            perm[image - 1] = k + 1
            scale[image - 1] = 1.0 / self.scale[k]
        return GaugeTransform(tuple(perm), scale)

    def then(self, other: "GaugeTransform") -> "GaugeTransform":
        """Composite transform equal to applying ``self`` first, then ``other``."""
        if other.K != self.K:
            raise InvalidTransform(f"cannot compose transforms of sizes {self.K} and {other.K}")
        perm = tuple(other.perm[p - 1] for p in self.perm)
        scale = self.scale * other.scale[np.array(self.perm) - 1]
        return GaugeTransform(perm, scale)
