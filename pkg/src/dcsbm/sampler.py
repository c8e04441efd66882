"""Random adjacency matrices with a prescribed expected matrix.

Entries above the diagonal are drawn independently with mean equal to
the corresponding expected entry, mirrored below, with a zero diagonal.
Randomness comes from the counter-based Philox generator keyed by the
seed, consuming one variate per upper-triangle entry in row-major order
(pair (1,2), (1,3), ..., sample by sample), so sequences are bitwise
reproducible for a fixed seed.  Bernoulli draws are derived from
standard uniforms as ``u < p``; the test suite pins the first uniforms
of seed 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptyInput, RangeError
from .model import ExpectedMatrix, MatrixKind, ParameterSystem, expected_adjacency


class Distribution(Enum):
    """Link distributions: binary edges, counts, or the exact mean itself."""

    BERNOULLI = "bernoulli"
    POISSON = "poisson"
    EXACT_WEIGHT = "exact"


@dataclass
class SampleConfig:
    distribution: Distribution
    seed: int
    count: int

    def __post_init__(self):
        if isinstance(self.distribution, str):
            self.distribution = Distribution(self.distribution)
        self.seed = int(self.seed)
        self.count = int(self.count)
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.count < 1:
            raise ValueError("count must be at least 1")


def _check_means(means: np.ndarray, pairs, dist: Distribution) -> None:
    if dist is Distribution.BERNOULLI:
        bad = (means < 0.0) | (means > 1.0)
        what = "a Bernoulli probability in [0, 1]"
    elif dist is Distribution.POISSON:
        bad = means < 0.0
        what = "a nonnegative Poisson rate"
    else:
        return
    if np.any(bad):
        p = int(np.flatnonzero(bad)[0])
        i, j = pairs[0][p] + 1, pairs[1][p] + 1
        raise RangeError(
            f"expected entry ({i}, {j}) = {means[p]!r} is not {what}"
        )


def sample_adjacency(sys: ParameterSystem, cfg: SampleConfig) -> np.ndarray:
    """Independent adjacency samples, stacked as a (count, n, n) array.

    Each slice is symmetric with a zero diagonal and entrywise mean equal
    to the system's expected matrix off the diagonal.  ExactWeight emits
    the expected matrix itself in every slice, for noise-free pipeline
    tests.
    """
    n = sys.n
    delta = expected_adjacency(sys).m
    iu, ju = np.triu_indices(n, 1)
    means = delta[iu, ju]
    _check_means(means, (iu, ju), cfg.distribution)

    if cfg.distribution is Distribution.EXACT_WEIGHT:
        draws = np.broadcast_to(means, (cfg.count, means.size))
    else:
        rng = np.random.Generator(np.random.Philox(key=cfg.seed))
        if cfg.distribution is Distribution.BERNOULLI:
            draws = (rng.random((cfg.count, means.size)) < means).astype(float)
        else:
            draws = rng.poisson(lam=means, size=(cfg.count, means.size)).astype(float)

    samples = np.zeros((cfg.count, n, n))
    samples[:, iu, ju] = draws
    samples[:, ju, iu] = draws
    return samples


def empirical_mean(samples) -> ExpectedMatrix:
    """Entrywise mean of a stack of adjacency samples, diagonal zeroed."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 3 and arr.shape[0] == 0:
        raise EmptyInput("no samples to average")
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError("samples must form a (count, n, n) stack of square matrices")
    mean = arr.mean(axis=0)
    np.fill_diagonal(mean, 0.0)
    return ExpectedMatrix(mean, MatrixKind.OFFDIAG)
