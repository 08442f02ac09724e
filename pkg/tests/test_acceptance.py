"""Acceptance suite: one pass/fail line per shipped guarantee.

Criteria 1-3 rerun the full 500-run benchmark presets (about a minute
each); everything else is fast.  Criterion 8 exercises an external
dataset and skips when no such file is supplied.
"""

import csv
import io
import os
from math import comb

import numpy as np
import pytest

from contourreg import (
    PRESETS,
    GeneralContourRegression,
    Subspace,
    build_estimator,
    derive_seed,
    make_rng,
    orthonormalize,
    run_comparison,
    scree,
    subspace_distance,
)
from contourreg.cli import ingest_csv, main
from contourreg.contours import accumulate_fhat, pair_statistics, tube_variance
from contourreg.whitening import inverse_sqrt
from conftest import random_orthonormal
from test_contours import scan_tube_variance

BENCH_RUNS = 500


def run_preset(name):
    cfg = PRESETS[name]
    report = run_comparison(cfg["designs"], cfg["sigmas"], cfg["methods"],
                            runs=BENCH_RUNS, n=100, base_seed=0)
    table = {(c.sigma, c.method): c for c in report.cells}
    lines = [f"{name} ({BENCH_RUNS} runs):"]
    for c in report.cells:
        lines.append(f"  sigma={c.sigma:<4} {c.method:<5} "
                     f"mean={c.mean_distance:.4f} se={c.se:.4f} "
                     f"failures={c.failures}")
    print("\n".join(lines))
    assert all(c.valid for c in report.cells)
    return table


@pytest.fixture(scope="module")
def table1():
    return run_preset("table1")


@pytest.fixture(scope="module")
def table2():
    return run_preset("table2")


@pytest.fixture(scope="module")
def table3():
    return run_preset("table3")


def test_criterion_1_fold_surface_benchmark(table1):
    """Contour method dominates on the folded 4-d design at n=100."""
    targets = {0.1: 0.16, 0.4: 0.20, 0.8: 0.32}
    for sigma, center in targets.items():
        gcr = table1[(sigma, "gcr")].mean_distance
        assert abs(gcr - center) <= 0.10, (sigma, gcr)
        save = table1[(sigma, "save")].mean_distance
        others = min(table1[(sigma, "sir")].mean_distance,
                     table1[(sigma, "phd")].mean_distance)
        assert gcr < save < others, (sigma, gcr, save, others)


def test_criterion_2_two_direction_benchmark(table2):
    """Two-direction design: contour method leads, then sir, then save."""
    targets = {0.1: 0.28, 0.4: 0.33, 0.8: 0.45}
    for sigma, center in targets.items():
        gcr = table2[(sigma, "gcr")].mean_distance
        assert abs(gcr - center) <= 0.12, (sigma, gcr)
        sir = table2[(sigma, "sir")].mean_distance
        save = table2[(sigma, "save")].mean_distance
        assert gcr < sir < save, (sigma, gcr, sir, save)


def test_criterion_3_single_index_benchmark(table3):
    """Single-index arch design: contour method wins outright."""
    targets = {0.1: 0.10, 0.2: 0.12, 0.3: 0.20}
    for sigma, center in targets.items():
        gcr = table3[(sigma, "gcr")].mean_distance
        assert abs(gcr - center) <= 0.08, (sigma, gcr)
        rivals = [table3[(sigma, m)].mean_distance
                  for m in ("ols", "sir", "save", "phd")]
        assert gcr < min(rivals), (sigma, gcr, rivals)


def test_criterion_4_kernel_matches_naive_recomputation():
    """Pair moment is bit-identical to a literal double-loop oracle."""
    sizes = [10] * 20 + [30] * 20 + [100] * 10
    for k, n in enumerate(sizes):
        rng = make_rng(derive_seed(9000, k))
        p = (2, 4, 6)[k % 3]
        radius = (0.5, 0.8, 1.2)[(k // 3) % 3]
        pts = rng.standard_normal((n, p))
        y = pts[:, 0] ** 2 + 0.1 * rng.standard_normal(n)

        rows = []
        for i in range(1, n):
            for j in range(i):
                rows.append((scan_tube_variance(pts, y, i, j, radius), i, j))
        if k % 2 == 0:
            rule = ("top", 2 * n)
            keep = sorted(rows)[: 2 * n]
        else:
            cutoff = float(np.median([r[0] for r in rows]))
            rule = ("threshold", cutoff)
            keep = [r for r in rows if r[0] <= cutoff]
        keep = sorted(keep, key=lambda r: (r[1], r[2]))
        f_ref = np.zeros((p, p))
        for _, i, j in keep:
            u = pts[j] - pts[i]
            f_ref += np.outer(u, u)
        f_ref /= comb(n, 2)

        moment = accumulate_fhat(pts, y, statistic="tube", radius=radius,
                                 rule=rule)
        assert np.array_equal(moment.matrix, f_ref), (k, n, p, radius)
        got = [(int(i), int(j)) for i, j, _ in moment.pair_stats]
        assert got == [(i, j) for _, i, j in keep], (k, n)
        if n <= 30:  # exhaustive per-pair statistic comparison
            stats, _ = pair_statistics(pts, y, statistic="tube",
                                       radius=radius)
            assert np.array_equal(stats, np.array([r[0] for r in rows]))
    print(f"verified {len(sizes)} datasets bitwise "
          "(20 at n=10, 20 at n=30, 10 at n=100)")


def test_criterion_5_equivariance_and_metric_axioms():
    rng = make_rng(2468)

    # (a) raw geometry: rigid motions rotate the estimate exactly
    x = rng.standard_normal((80, 4))
    y = (x[:, 0] + 0.5 * x[:, 1]) ** 2 + 0.1 * rng.standard_normal(80)
    raw = dict(n_components=2, tube_radius=0.8, geometry="raw")
    base = GeneralContourRegression(**raw).fit(x, y)
    qmat = random_orthonormal(rng, 4, 4)
    shift = rng.standard_normal(4)
    moved = GeneralContourRegression(**raw).fit(x @ qmat.T + shift, y)
    d_rigid = subspace_distance(moved.directions_, qmat @ base.directions_)
    assert d_rigid <= 1e-8, d_rigid

    # (b) standardized geometry: full affine maps transform the span
    amat = np.eye(4) + 0.25 * rng.standard_normal((4, 4))
    assert np.linalg.cond(amat) < 50.0
    std_base = GeneralContourRegression(n_components=2, tube_radius=0.8).fit(x, y)
    std_moved = GeneralContourRegression(n_components=2, tube_radius=0.8).fit(
        x @ amat.T + shift, y)
    expected = orthonormalize(np.linalg.solve(amat.T, std_base.directions_))
    d_affine = subspace_distance(std_moved.directions_, expected)
    assert d_affine <= 1e-6, d_affine

    # baselines obey the same affine rule
    xb = rng.standard_normal((400, 4))
    yb = xb[:, 0] + xb[:, 1] ** 2 + 0.2 * rng.standard_normal(400)
    worst = {}
    for method in ("ols", "sir", "save", "phd"):
        est0 = build_estimator(method, 1).fit(xb, yb)
        est1 = build_estimator(method, 1).fit(xb @ amat.T + shift, yb)
        want = orthonormalize(np.linalg.solve(amat.T, est0.directions_))
        worst[method] = subspace_distance(est1.directions_, want)
        assert worst[method] <= 1e-6, (method, worst[method])

    # (c) the distance is a genuine metric on subspaces
    for trial in range(1000):
        a, b, c = (Subspace(random_orthonormal(rng, 6, int(d)))
                   for d in rng.integers(1, 4, size=3))
        dab = subspace_distance(a, b)
        dba = subspace_distance(b, a)
        dac = subspace_distance(a, c)
        dbc = subspace_distance(b, c)
        assert abs(dab - dba) <= 1e-9
        assert subspace_distance(a, a) <= 1e-9
        assert dac <= dab + dbc + 1e-9
        assert -1e-9 <= dab <= 1.0 + 1e-9
    print(f"rigid={d_rigid:.2e} affine={d_affine:.2e} "
          f"baselines={max(worst.values()):.2e}; 1000 metric triples ok")


def test_criterion_6_analytic_hand_values():
    root = inverse_sqrt(np.diag([4.0, 9.0]))
    assert np.max(np.abs(root - np.diag([0.5, 1.0 / 3.0]))) < 1e-10

    e1 = Subspace(np.array([1.0, 0.0]))
    e2 = Subspace(np.array([0.0, 1.0]))
    diag = Subspace(np.array([1.0, 1.0]) / np.sqrt(2.0))
    assert subspace_distance(e1, e1) < 1e-10
    assert abs(subspace_distance(e1, e2) - 1.0) < 1e-10
    assert abs(subspace_distance(e1, diag) - np.sqrt(2.0) / 2.0) < 1e-10

    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.1]])
    assert abs(tube_variance(pts, np.array([1.0, 3.0, 10.0]), 0, 1, 0.05)
               - 1.0) < 1e-10
    assert abs(tube_variance(pts, np.array([1.0, 2.0, 3.0]), 0, 1, 0.2)
               - 2.0 / 3.0) < 1e-10
    assert abs(tube_variance(pts, np.array([0.0, 1.0, 5.0]), 0, 1, 0.05)
               - 0.25) < 1e-10


def test_criterion_7_symmetric_fold_defeats_slicing():
    """On y = x2^2 the slice-mean method collapses; contours do not."""
    rng = make_rng(505)
    x = rng.standard_normal((1000, 2))
    y = x[:, 1] ** 2
    truth = Subspace(np.array([0.0, 1.0]))
    sir = build_estimator("sir", 1).fit(x, y)
    d_sir = subspace_distance(sir.directions_, truth)
    gcr = build_estimator("gcr", 1, tube_radius=0.3).fit(x, y)
    d_gcr = subspace_distance(gcr.directions_, truth)
    print(f"sir={d_sir:.4f} (needs > 0.5), gcr={d_gcr:.4f} (needs < 0.2)")
    assert d_sir > 0.5
    assert d_gcr < 0.2


def _find_colleges_csv():
    candidates = [os.environ.get("CONTOURREG_COLLEGES_CSV", "")]
    here = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    candidates += [
        os.path.join(here, "data", "colleges.csv"),
        os.path.join(here, "colleges.csv"),
        os.path.join(here, "examples", "colleges.csv"),
    ]
    for path in candidates:
        if path and os.path.isfile(path):
            return path
    return None


def test_criterion_8_external_dataset_scree():
    path = _find_colleges_csv()
    if path is None:
        pytest.skip("colleges dataset not supplied (set "
                    "CONTOURREG_COLLEGES_CSV to enable)")
    with open(path, newline="") as handle:
        header = next(csv.reader(handle))
    response = "Grad" if "Grad" in header else header[-1]
    dataset, _ = ingest_csv(path, response)
    n = dataset.n_samples
    est = GeneralContourRegression(n_components=2, tube_radius=0.03, pair_rule="top",
              n_pairs=4 * n).fit(dataset.predictors, dataset.response)
    result = scree(est.eigenvalues_, convention="smallest")
    print(f"n={n} eigenvalues={est.eigenvalues_} "
          f"suggested_q={result.suggested_q}")
    assert int(np.argmax(result.gaps)) == 1
    assert result.suggested_q == 2


def test_criterion_9_cli_runs_are_reproducible(capsys, tmp_path):
    def invoke(argv):
        code = main(argv)
        out, err = capsys.readouterr()
        assert code == 0 and err == ""
        return out

    small_t1 = ["simulate", "--preset", "table1", "--runs", "25"]
    first = invoke(small_t1 + ["--format", "csv"])
    second = invoke(small_t1 + ["--format", "csv"])
    assert first == second
    assert invoke(small_t1 + ["--format", "json"]) == invoke(
        small_t1 + ["--format", "json"])

    small_t3 = ["simulate", "--preset", "table3", "--runs", "10",
                "--format", "csv"]
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert invoke(small_t3 + ["--output", str(out_a)]) == ""
    assert invoke(small_t3 + ["--output", str(out_b)]) == ""
    assert out_a.read_bytes() == out_b.read_bytes()
    rows = list(csv.reader(io.StringIO(out_a.read_text())))
    assert rows[0] == ["design", "sigma", "method", "dist", "se", "runs",
                       "failures"]
    assert len(rows) == 16

    reseeded = invoke(small_t1 + ["--format", "csv", "--seed", "7"])
    assert reseeded != first  # seed actually reaches the generator
    assert invoke(small_t1 + ["--format", "csv", "--seed", "7"]) == reseeded
