"""Random model instances for round-trip and property testing.

Connectivity matrices are drawn full rank by construction (orthogonal
conjugation of a diagonal bounded away from zero), with optional
rejection until every entry is nonzero.  Assignments can be forced to a
minimum community size, which is how the identifiability size conditions
are dialed in.
"""

from __future__ import annotations

import numpy as np

from .model import ParameterSystem, system
from .partitions import GaugeTransform


def random_assignment(rng: np.random.Generator, n: int, K: int, min_size: int = 1) -> np.ndarray:
    """Random 1..K labels with every community of at least ``min_size``."""
    if n < K * min_size:
        raise ValueError(f"cannot fit {K} communities of size >= {min_size} into {n} nodes")
    labels = np.concatenate(
        [np.repeat(np.arange(1, K + 1), min_size), rng.integers(1, K + 1, n - K * min_size)]
    )
    rng.shuffle(labels)
    return labels


def random_theta(rng: np.random.Generator, n: int, low: float = 0.5, high: float = 2.0) -> np.ndarray:
    return rng.uniform(low, high, n)


def random_connectivity(
    rng: np.random.Generator, K: int, entrywise_nonzero: bool = False
) -> np.ndarray:
    """Random symmetric full-rank K x K matrix.

    Eigenvalues have magnitude in [0.5, 2] with random signs, so the
    matrix may be indefinite.  With ``entrywise_nonzero`` the draw is
    rejected until every entry has magnitude at least 0.05.
    """
    while True:
        Q = np.linalg.qr(rng.normal(size=(K, K)))[0]
        spectrum = rng.uniform(0.5, 2.0, K) * rng.choice([-1.0, 1.0], K)
        B = (Q * spectrum) @ Q.T
        B = np.triu(B) + np.triu(B, 1).T
        if not entrywise_nonzero or np.abs(B).min() >= 0.05:
            return B


def random_system(
    rng: np.random.Generator,
    n: int,
    K: int,
    min_size: int = 1,
    entrywise_nonzero: bool = False,
) -> ParameterSystem:
    return system(
        random_assignment(rng, n, K, min_size),
        random_theta(rng, n),
        random_connectivity(rng, K, entrywise_nonzero),
    )


def random_transform(rng: np.random.Generator, K: int) -> GaugeTransform:
    perm = tuple(int(p) for p in rng.permutation(K) + 1)
    return GaugeTransform(perm, rng.uniform(0.5, 2.0, K))


def random_isolated_pair_system(rng: np.random.Generator, n: int, K: int) -> ParameterSystem:
    """A system whose last community has exactly 2 members and an isolated row.

    Community K's connectivity row is exactly zero off its diagonal entry,
    so no third node constrains the degree split inside it; the other
    communities get at least 3 members each.  Requires n >= 3(K-1) + 2.
    """
    if K < 2:
        raise ValueError("need at least 2 communities to isolate one")
    rest = n - 2
    labels = np.concatenate(
        [random_assignment(rng, rest, K - 1, min_size=3), np.full(2, K)]
    )
    rng.shuffle(labels)
    B = np.zeros((K, K))
    B[: K - 1, : K - 1] = random_connectivity(rng, K - 1)
    B[K - 1, K - 1] = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
    return system(labels, random_theta(rng, n), B)
