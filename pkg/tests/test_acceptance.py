"""Ten end-to-end checks, one per headline claim of the library.

Each test prints a single pass/fail line (run pytest with -s to see them
on success) and enforces a wall-clock budget where one is stated.
"""

import time

import numpy as np

from dcsbm import (
    Distribution,
    SampleConfig,
    apply_transform,
    construct_size2_counterexample,
    empirical_mean,
    equivalent,
    example_fixture,
    expected_adjacency,
    offdiag_project,
    sample_adjacency,
    system,
    verify_counterexample,
)
from dcsbm.cli import run
from dcsbm.io import write_matrix, write_system
from dcsbm.partitions import partition_from_labels
from dcsbm.random_systems import (
    random_assignment,
    random_connectivity,
    random_isolated_pair_system,
    random_system,
    random_theta,
    random_transform,
)
from dcsbm.recovery import (
    completion_residual,
    lowrank_complete,
    offdiag_partition,
    offdiag_recover,
    reconstruct_diagonal,
    spectral_recover,
)


def _check(failures: list, ok: bool, message: str) -> None:
    if not ok:
        failures.append(message)


def _verdict(num: int, name: str, failures: list, elapsed: float, budget=None) -> None:
    over = budget is not None and elapsed >= budget
    status = "FAIL" if failures or over else "PASS"
    suffix = f" of {budget:g}s" if budget is not None else ""
    print(f"acceptance {num:02d} {name}: {status} ({elapsed:.2f}s{suffix})")
    assert not failures, "; ".join(failures)
    assert not over, f"runtime {elapsed:.2f}s exceeded budget {budget:g}s"


def test_acceptance_01_example_pair_1(tmp_path):
    started = time.perf_counter()
    failures = []
    pair = example_fixture(1)
    d1 = expected_adjacency(pair.sys1).m
    d2 = expected_adjacency(pair.sys2).m
    target1 = np.array([[0.2, 0.1, 0.1], [0.1, 0.2, 0.2], [0.1, 0.2, 0.2]])
    target2 = np.array([[0.05, 0.1, 0.1], [0.1, 0.2, 0.2], [0.1, 0.2, 0.8]])
    _check(failures, np.abs(d1 - target1).max() <= 1e-15, "first matrix off target")
    _check(failures, np.abs(d2 - target2).max() <= 1e-15, "second matrix off target")

    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_system(pair.sys1, a)
    write_system(pair.sys2, b)
    same = run(["same-offdiag", "--a", str(a), "--b", str(b)])
    _check(failures, same.exit_code == 0, f"same-offdiag exited {same.exit_code}")
    _check(failures, same.payload.get("same_offdiag") is True, "off-diagonals differ")
    eq = run(["equiv", "--a", str(a), "--b", str(b)])
    _check(failures, eq.exit_code == 1, f"equiv exited {eq.exit_code}, wanted 1")
    _check(failures, eq.payload.get("reason") == "partition", f"reason {eq.payload.get('reason')!r}")
    _verdict(1, "example-pair-1", failures, time.perf_counter() - started, budget=1.0)


def test_acceptance_02_example_pair_2(tmp_path):
    started = time.perf_counter()
    failures = []
    pair = example_fixture(2)
    d1 = expected_adjacency(pair.sys1).m
    d2 = expected_adjacency(pair.sys2).m
    target1 = np.array(
        [
            [0.1, 0.1, 0.0, 0.0],
            [0.1, 0.1, 0.0, 0.0],
            [0.0, 0.0, 0.4, 0.4],
            [0.0, 0.0, 0.4, 0.4],
        ]
    )
    target2 = np.array(
        [
            [0.1, 0.1, 0.0, 0.0],
            [0.1, 0.1, 0.0, 0.0],
            [0.0, 0.0, 0.2, 0.4],
            [0.0, 0.0, 0.4, 0.8],
        ]
    )
    _check(failures, np.abs(d1 - target1).max() <= 1e-15, "first matrix off target")
    _check(failures, np.abs(d2 - target2).max() <= 1e-15, "second matrix off target")

    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_system(pair.sys1, a)
    write_system(pair.sys2, b)
    same = run(["same-offdiag", "--a", str(a), "--b", str(b)])
    _check(failures, same.exit_code == 0 and same.payload["same_offdiag"] is True, "off-diagonals differ")
    eq = run(["equiv", "--a", str(a), "--b", str(b)])
    _check(failures, eq.exit_code == 1, f"equiv exited {eq.exit_code}, wanted 1")
    _check(failures, eq.payload.get("reason") == "theta", f"reason {eq.payload.get('reason')!r}")

    pd_path = tmp_path / "pd.csv"
    write_matrix(offdiag_project(expected_adjacency(pair.sys1)), pd_path)
    rec = run(["recover", "--matrix", str(pd_path), "--from", "offdiag"])
    _check(failures, rec.exit_code == 1, f"recover exited {rec.exit_code}, wanted 1")
    _check(failures, rec.payload.get("error") == "non-identifiable", "missing verdict")
    _check(
        failures,
        rec.payload.get("witness_counts") == [0, 0, 0, 0],
        f"witness counts {rec.payload.get('witness_counts')}",
    )
    _verdict(2, "example-pair-2", failures, time.perf_counter() - started, budget=1.0)


def test_acceptance_03_example_pair_3():
    started = time.perf_counter()
    failures = []
    pair = example_fixture(3)
    d1 = expected_adjacency(pair.sys1).m
    d2 = expected_adjacency(pair.sys2).m
    target1 = np.array([[0.1, 0.0, 0.0], [0.0, 0.1, 0.1], [0.0, 0.1, 0.1]])
    target2 = np.array([[0.2, 0.0, 0.0], [0.0, 0.1, 0.1], [0.0, 0.1, 0.1]])
    _check(failures, np.abs(d1 - target1).max() <= 1e-15, "first matrix off target")
    _check(failures, np.abs(d2 - target2).max() <= 1e-15, "second matrix off target")
    report = verify_counterexample(pair)
    _check(failures, report.same_offdiag, "pair should agree off the diagonal")
    _check(failures, report.b_differs, "connectivity matrices should differ")
    _check(failures, report.not_equivalent, "pair should not be gauge equivalent")
    _check(failures, report.passed, "verifier rejected the fixture")
    _verdict(3, "example-pair-3", failures, time.perf_counter() - started)


def test_acceptance_04_gauge_invariance():
    started = time.perf_counter()
    failures = []
    rng = np.random.default_rng(1004)
    worst = 0.0
    for _ in range(1000):
        K = int(rng.integers(1, 6))
        n = int(rng.integers(K, 51))
        s = random_system(rng, n, K)
        g = random_transform(rng, K)
        a = expected_adjacency(s).m
        b = expected_adjacency(apply_transform(s, g)).m
        worst = max(worst, float((np.abs(a - b) / (1.0 + np.abs(b))).max()))
    _check(failures, worst <= 1e-12, f"worst relative gap {worst:.2e} > 1e-12")
    _verdict(4, "gauge-invariance", failures, time.perf_counter() - started, budget=30.0)


def test_acceptance_05_spectral_round_trip():
    started = time.perf_counter()
    failures = []
    rng = np.random.default_rng(1005)
    worst = 0.0
    bad = 0
    for _ in range(200):
        K = int(rng.integers(1, 6))
        n = int(rng.integers(3 * K, 101))
        s = random_system(rng, n, K, min_size=3)
        report = spectral_recover(expected_adjacency(s), K)
        worst = max(worst, report.residual)
        if not equivalent(s, report.system, tol=1e-8):
            bad += 1
    _check(failures, bad == 0, f"{bad} of 200 recoveries not equivalent at 1e-8")
    _check(failures, worst <= 1e-9, f"worst residual {worst:.2e} > 1e-9")
    _verdict(5, "spectral-round-trip", failures, time.perf_counter() - started, budget=60.0)


def test_acceptance_06_offdiag_round_trip():
    started = time.perf_counter()
    failures = []
    rng = np.random.default_rng(1006)
    bad_equiv = 0
    worst_diag = 0.0
    for _ in range(200):
        K = int(rng.integers(1, 6))
        n = int(rng.integers(3 * K, 61))
        s = random_system(rng, n, K, min_size=3, entrywise_nonzero=True)
        report = offdiag_recover(offdiag_project(expected_adjacency(s)))
        if not equivalent(s, report.system, tol=1e-7):
            bad_equiv += 1
        truth = reconstruct_diagonal(s)
        got = reconstruct_diagonal(report.system)
        worst_diag = max(worst_diag, float((np.abs(got - truth) / (1.0 + np.abs(truth))).max()))
    _check(failures, bad_equiv == 0, f"{bad_equiv} of 200 recoveries not equivalent at 1e-7")
    _check(failures, worst_diag <= 1e-8, f"worst diagonal gap {worst_diag:.2e} > 1e-8")
    _verdict(6, "offdiag-round-trip", failures, time.perf_counter() - started, budget=60.0)


def test_acceptance_07_partition_exactness():
    started = time.perf_counter()
    failures = []
    rng = np.random.default_rng(1007)
    bad = 0
    for _ in range(200):
        K = int(rng.integers(1, 6))
        n = int(rng.integers(max(2 * K, 4), 101))
        s = random_system(rng, n, K, min_size=2, entrywise_nonzero=True)
        part = offdiag_partition(offdiag_project(expected_adjacency(s)))
        if part != partition_from_labels(s.labels):
            bad += 1
    _check(failures, bad == 0, f"{bad} of 200 partitions wrong")
    _verdict(7, "partition-exactness", failures, time.perf_counter() - started, budget=30.0)


def test_acceptance_08_diagonal_completion():
    started = time.perf_counter()
    failures = []
    pair = example_fixture(1)
    d1 = expected_adjacency(pair.sys1)
    d2 = expected_adjacency(pair.sys2)
    off = ~np.eye(3, dtype=bool)
    _check(failures, np.array_equal(d1.m[off], d2.m[off]), "pair should share off-diagonals")
    r1 = completion_residual(d1, 2)
    r2 = completion_residual(d2, 2)
    _check(failures, r1 <= 1e-10, f"first completion residual {r1:.2e} > 1e-10")
    _check(failures, r2 <= 1e-10, f"second completion residual {r2:.2e} > 1e-10")
    _check(failures, np.abs(d1.m - d2.m).max() > 0.1, "completions should differ on the diagonal")

    # The alternating truncation only contracts when no node holds half or
    # more of its community's squared degree mass; keep the draw inside
    # that regime (theta ratio at most 2, community size at least 6).
    rng = np.random.default_rng(1008)
    worst = 0.0
    stuck = 0
    for _ in range(20):
        K = int(rng.integers(1, 5))
        n = int(rng.integers(6 * K, 49))
        labels = random_assignment(rng, n, K, min_size=6)
        s = system(
            labels,
            random_theta(rng, n, 0.75, 1.5),
            random_connectivity(rng, K, entrywise_nonzero=True),
        )
        full = expected_adjacency(s)
        completed, _, converged = lowrank_complete(offdiag_project(full), K)
        if not converged:
            stuck += 1
        gap = np.abs(np.diag(completed.m) - np.diag(full.m)) / (1.0 + np.abs(np.diag(full.m)))
        worst = max(worst, float(gap.max()))
    _check(failures, stuck == 0, f"{stuck} of 20 completions did not converge")
    _check(failures, worst <= 1e-6, f"worst completed diagonal gap {worst:.2e} > 1e-6")
    _verdict(8, "diagonal-completion", failures, time.perf_counter() - started, budget=30.0)


def test_acceptance_09_constructed_twins():
    started = time.perf_counter()
    failures = []
    rng = np.random.default_rng(1009)
    bad = 0
    for _ in range(100):
        K = int(rng.integers(2, 6))
        n = int(rng.integers(3 * (K - 1) + 2, 41))
        s = random_isolated_pair_system(rng, n, K)
        while True:
            c = float(rng.uniform(0.1, 4.0))
            if abs(c - 1.0) > 1e-3:
                break
        pair = construct_size2_counterexample(s, K, c)
        if not verify_counterexample(pair, tol=1e-12).passed:
            bad += 1
    _check(failures, bad == 0, f"{bad} of 100 constructed pairs failed verification")
    _verdict(9, "constructed-twins", failures, time.perf_counter() - started, budget=10.0)


def test_acceptance_10_sampling_consistency():
    started = time.perf_counter()
    failures = []
    draws = 200000

    s1 = example_fixture(1).sys1
    mean1 = empirical_mean(
        sample_adjacency(s1, SampleConfig(Distribution.BERNOULLI, 20, draws))
    ).m
    delta1 = expected_adjacency(s1).m
    for i in range(3):
        for j in range(i + 1, 3):
            p = delta1[i, j]
            se = np.sqrt(p * (1.0 - p) / draws)
            gap = abs(mean1[i, j] - p)
            _check(
                failures,
                gap <= 5.0 * se,
                f"entry ({i + 1},{j + 1}) off by {gap:.2e} > 5 se = {5 * se:.2e}",
            )

    s2 = example_fixture(2).sys1
    mean2 = empirical_mean(
        sample_adjacency(s2, SampleConfig(Distribution.BERNOULLI, 21, draws))
    )
    part = offdiag_partition(mean2, tol=0.05)
    _check(failures, part.blocks == ((1, 2), (3, 4)), f"pipeline partition {part.blocks}")
    _verdict(10, "sampling-consistency", failures, time.perf_counter() - started, budget=120.0)
