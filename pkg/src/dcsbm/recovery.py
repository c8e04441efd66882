"""Reading model parameters back out of expected matrices.

Three routes are implemented.  From a full expected matrix, an
eigendecomposition pins down the community structure, degree parameters,
and connectivity matrix exactly (up to gauge).  From a diagonal-deleted
matrix, rows are compared pairwise to recover the community partition,
and degree parameters are recovered through witness entries in other
nodes' rows when those exist.  Independently of either, an alternating
fixed-point iteration completes the missing diagonal against a rank
constraint, as a cross-check on whether the diagonal is actually forced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClusterCountMismatch,
    InvalidMatrix,
    NonIdentifiable,
    RankMismatch,
    TooSmall,
)
from .model import (
    DEFAULT_RANK_TOL,
    ExpectedMatrix,
    MatrixKind,
    ParameterSystem,
    expected_adjacency,
    offdiag_project,
    system,
)
from .partitions import (
    DEFAULT_PARTITION_TOL,
    Partition,
    UnionFind,
    row_proportional_partition,
)


def _matrix_of_kind(delta: ExpectedMatrix, kind: MatrixKind) -> np.ndarray:
    if not isinstance(delta, ExpectedMatrix) or delta.kind is not kind:
        raise InvalidMatrix(f"expected an ExpectedMatrix of kind {kind.value!r}")
    return delta.m


@dataclass(eq=False)
class SpectralDecomposition:
    """The retained top eigenpairs of a full expected matrix.

    ``eigenvectors`` has orthonormal columns (one per retained pair) and
    ``eigenvalues`` holds the matching nonzero eigenvalues, ordered by
    descending magnitude with ties broken by ascending value.  Each
    eigenvector's first nonzero coordinate is positive.
    """

    eigenvectors: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self):
        self.eigenvectors = np.asarray(self.eigenvectors, dtype=float)
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        n, k = self.eigenvectors.shape
        if self.eigenvalues.shape != (k,):
            raise ValueError("one eigenvalue per eigenvector column required")
        gram = self.eigenvectors.T @ self.eigenvectors
        if np.abs(gram - np.eye(k)).max() > 1e-10:
            raise ValueError("eigenvector columns must be orthonormal within 1e-10")
        mags = np.abs(self.eigenvalues)
        if mags.size and mags.min() <= DEFAULT_RANK_TOL * mags.max():
            raise ValueError("retained eigenvalues must all be numerically nonzero")

    @property
    def K(self) -> int:
        return int(self.eigenvalues.shape[0])


def _fix_column_signs(V: np.ndarray) -> np.ndarray:
    for c in range(V.shape[1]):
        col = V[:, c]
        nz = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())
        if nz.size and col[nz[0]] < 0:
            V[:, c] = -col
    return V


def spectral_decomposition(
    delta: ExpectedMatrix, K: int, rank_tol: float = DEFAULT_RANK_TOL
) -> SpectralDecomposition:
    """Top-K eigenpairs of a full expected matrix, with rank checking.

    The numerical rank (eigenvalues above ``rank_tol`` relative to the
    largest magnitude) must equal K, otherwise RankMismatch is raised.
    """
    m = _matrix_of_kind(delta, MatrixKind.FULL)
    if K < 1:
        raise ValueError("K must be a positive integer")
    w, V = np.linalg.eigh(m)
    scale = np.abs(w).max()
    rank = int(np.count_nonzero(np.abs(w) > rank_tol * scale)) if scale > 0 else 0
    if rank != K:
        raise RankMismatch(
            f"numerical rank {rank} does not match the requested K={K} "
            f"(rank_tol={rank_tol:g})"
        )
    order = np.lexsort((w, -np.abs(w)))[:K]
    return SpectralDecomposition(_fix_column_signs(V[:, order]), w[order])


@dataclass(eq=False)
class RecoveryReport:
    """A recovered parameter system with its reconstruction diagnostics.

    ``residual`` is the max entrywise mismatch of the reconstruction
    against the input, relative as ``|a - b| / (1 + |b|)``.  The witness
    fields are populated by diagonal-deleted recovery only: per node, the
    row entries used to pin its degree parameter (a community's anchor
    node has nothing to estimate, so its count summarizes the weakest
    member anchored to it), and per community the worst ratio spread seen
    across witnesses.
    """

    system: ParameterSystem
    residual: float
    witness_counts: list[int] = field(default_factory=list)
    theta_spread: list[float] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    witnesses: list[list[int]] = field(default_factory=list)


def _relative_residual(recon: np.ndarray, target: np.ndarray) -> float:
    return float((np.abs(recon - target) / (1.0 + np.abs(target))).max())


def spectral_recover(
    delta: ExpectedMatrix,
    K: int,
    tol: float = DEFAULT_PARTITION_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> RecoveryReport:
    """Recover a parameter system from a full rank-K expected matrix.

    Rows of the top-K eigenvector matrix are positively proportional
    exactly within communities, so clustering them recovers the labels;
    row norm ratios recover the degree parameters within each community,
    anchored to 1 at the community's minimum member; connectivity entries
    are then read off at those anchor nodes.  The result is in canonical
    gauge and reproduces the input up to the reported residual.
    """
    m = _matrix_of_kind(delta, MatrixKind.FULL)
    dec = spectral_decomposition(delta, K, rank_tol)
    part, norms = row_proportional_partition(dec.eigenvectors, tol)
    if len(part) != K:
        raise ClusterCountMismatch(
            f"eigenvector rows form {len(part)} proportionality groups, expected K={K}"
        )
    theta = np.empty(m.shape[0])
    for block in part.blocks:
        idx = np.array(block) - 1
        theta[idx] = norms[idx] / norms[block[0] - 1]
    reps = np.array([b[0] - 1 for b in part.blocks])
    recovered = system(part.block_index(), theta, m[np.ix_(reps, reps)])
    residual = _relative_residual(expected_adjacency(recovered).m, m)
    return RecoveryReport(recovered, residual)


def offdiag_partition(delta: ExpectedMatrix, tol: float = DEFAULT_PARTITION_TOL) -> Partition:
    """Community partition read from a diagonal-deleted expected matrix.

    Nodes i and j are merged iff their rows, restricted to the columns
    outside {i, j}, have the same zero pattern and are positively
    proportional on the common nonzero support (vacuously so when that
    support is empty).  Zero means magnitude at most ``tol`` scaled by
    the matrix magnitude.  Union-find closes the passing pairs into a
    partition.

    With fewer than 4 nodes the restricted rows have at most one entry
    and the comparison degenerates, so TooSmall is raised.
    """
    m = _matrix_of_kind(delta, MatrixKind.OFFDIAG)
    n = m.shape[0]
    if n < 4:
        raise TooSmall(f"off-diagonal row comparison needs n >= 4 nodes, got {n}")
    thresh = tol * (1.0 + np.abs(m).max())
    nonzero = np.abs(m) > thresh
    uf = UnionFind(n)
    keep = np.ones(n, dtype=bool)
    for i in range(n - 1):
        for j in range(i + 1, n):
            if uf.find(i) == uf.find(j):
                continue
            keep[i] = keep[j] = False
            pat = nonzero[i][keep]
            if np.array_equal(pat, nonzero[j][keep]):
                if not pat.any():
                    uf.union(i, j)
                else:
                    a = m[i][keep][pat]
                    b = m[j][keep][pat]
                    sa = np.linalg.norm(a)
                    sb = np.linalg.norm(b)
                    # unit-normalized comparison; a negative factor cannot pass
                    if np.abs(a * sb - b * sa).max() <= tol * sa * sb:
                        uf.union(i, j)
            keep[i] = keep[j] = True
    return Partition(n, tuple(tuple(k + 1 for k in g) for g in uf.groups()))


def offdiag_recover(delta: ExpectedMatrix, tol: float = DEFAULT_PARTITION_TOL) -> RecoveryReport:
    """Recover a full parameter system from a diagonal-deleted matrix.

    After partitioning the nodes, each community is anchored at its
    minimum member (degree parameter 1).  Every other member's parameter
    is the ratio of its row to the anchor's row, averaged over witness
    columns where the anchor row is nonzero; connectivity entries average
    the rescaled matrix entries over all admissible node pairs, and the
    deleted diagonal is rebuilt from the recovered parameters.

    Raises NonIdentifiable, carrying the witness diagnostics, when some
    member has no witness column or some community has a single member
    (its self-connectivity never appears off the diagonal).
    """
    m = _matrix_of_kind(delta, MatrixKind.OFFDIAG)
    part = offdiag_partition(delta, tol)
    n = m.shape[0]
    K = len(part)
    thresh = tol * (1.0 + np.abs(m).max())

    theta = np.ones(n)
    witnesses: list[list[int]] = [[] for _ in range(n)]
    counts = [0] * n
    spreads = [0.0] * K
    stuck: list[int] = []
    for k, block in enumerate(part.blocks):
        anchor = block[0]
        if len(block) == 1:
            stuck.append(anchor)
            continue
        for i in block[1:]:
            cols = [
                w
                for w in range(1, n + 1)
                if w != i and w != anchor and abs(m[anchor - 1, w - 1]) > thresh
            ]
            witnesses[i - 1] = cols
            counts[i - 1] = len(cols)
            if not cols:
                stuck.append(i)
                continue
            ratios = [m[i - 1, w - 1] / m[anchor - 1, w - 1] for w in cols]
            theta[i - 1] = float(np.mean(ratios))
            spreads[k] = max(spreads[k], max(ratios) - min(ratios))
        counts[anchor - 1] = min(counts[i - 1] for i in block[1:])
    if stuck:
        raise NonIdentifiable(
            "degree parameters are underdetermined by the off-diagonal data "
            f"at node(s) {', '.join(map(str, sorted(stuck)))}",
            witness_counts=counts,
            partition=part,
            nodes=sorted(stuck),
        )

    B = np.zeros((K, K))
    for k in range(K):
        bk = np.array(part.blocks[k]) - 1
        for l in range(k, K):
            bl = np.array(part.blocks[l]) - 1
            sub = m[np.ix_(bk, bl)] / np.outer(theta[bk], theta[bl])
            vals = sub[~np.eye(len(bk), dtype=bool)] if k == l else sub.ravel()
            B[k, l] = B[l, k] = float(vals.mean())

    recovered = system(part.block_index(), theta, B)
    recon = offdiag_project(expected_adjacency(recovered)).m
    flags = [
        f"community {k + 1}: witness ratios spread {s:.3e} exceeds tol"
        for k, s in enumerate(spreads)
        if s > tol
    ]
    return RecoveryReport(
        recovered,
        _relative_residual(recon, m),
        witness_counts=counts,
        theta_spread=spreads,
        flags=flags,
        witnesses=witnesses,
    )


def reconstruct_diagonal(sys: ParameterSystem) -> np.ndarray:
    """Diagonal of the expected matrix: entry i is ``theta_i^2 B[z_i, z_i]``."""
    return sys.thetas**2 * sys.B[sys.labels - 1, sys.labels - 1]


def _best_rank(m: np.ndarray, K: int) -> np.ndarray:
    w, V = np.linalg.eigh(m)
    order = np.lexsort((w, -np.abs(w)))[:K]
    Vk = V[:, order]
    return (Vk * w[order]) @ Vk.T


def completion_residual(x, K: int) -> float:
    """Max-abs distance of a symmetric matrix from its best rank-K truncation."""
    m = x.m if isinstance(x, ExpectedMatrix) else np.asarray(x, dtype=float)
    return float(np.abs(m - _best_rank(m, K)).max())


def lowrank_complete(
    delta: ExpectedMatrix, K: int, max_iter: int = 500, conv_tol: float = 1e-10
) -> tuple[ExpectedMatrix, int, bool]:
    """Fill in a deleted diagonal by alternating rank-K truncation.

    Starting from the zero diagonal, each step replaces the diagonal with
    that of the current best rank-K approximation while keeping the given
    off-diagonal entries fixed.  Stops when the diagonal moves by at most
    ``conv_tol`` in max-abs, or after ``max_iter`` steps; non-convergence
    is reported through the flag, never raised.  Where the data admit
    several rank-K completions, this returns one of them; uniqueness is
    not implied.
    """
    m = _matrix_of_kind(delta, MatrixKind.OFFDIAG)
    if K < 1:
        raise ValueError("K must be a positive integer")
    if max_iter < 1:
        raise ValueError("max_iter must be a positive integer")
    X = m.copy()
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        new_diag = np.diag(_best_rank(X, K)).copy()
        moved = np.abs(new_diag - np.diag(X)).max()
        X = m.copy()
        np.fill_diagonal(X, new_diag)
        if moved <= conv_tol:
            converged = True
            break
    return ExpectedMatrix(X, MatrixKind.FULL), iterations, converged
