"""Benchmark designs and the Monte Carlo comparison harness.

Four synthetic regression designs with known central subspaces drive the
method comparison.  Each (design, noise level, run) triple derives its
own child seed from the base seed, every method within a run fits the
same generated sample, and aggregation is a plain mean with an
across-run standard deviation, so reports are reproducible bit for bit.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .base import Dataset, Subspace, derive_seed, make_rng, validate_dataset
from .estimators import build_estimator
from .exceptions import ConfigError, ContourRegError
from .metrics import subspace_distance

__all__ = [
    "Design",
    "DesignSpec",
    "DESIGNS",
    "PRESETS",
    "generate",
    "run_seed",
    "run_comparison",
    "CellResult",
    "SimulationReport",
]


@dataclass(frozen=True)
class Design:
    """A synthetic regression with a known central subspace."""

    design_id: str
    n_features: int
    structural_dim: int
    truth: Subspace
    sigma_grid: tuple
    sample: Callable = field(repr=False)
    signal: Callable = field(repr=False)


@dataclass(frozen=True)
class DesignSpec:
    """A request for one generated sample."""

    design_id: str
    n: int
    sigma: float
    seed: int


def _gaussian(p):
    def draw(rng, n):
        return rng.standard_normal((n, p))
    return draw


def _notched_cube(rng, n):
    # uniform on the unit 4-cube minus the corner where every coordinate
    # is at most 0.7; rejection sampling keeps ~76% of raw draws
    rows = []
    have = 0
    while have < n:
        draw = rng.random((n - have, 4))
        keep = draw[~np.all(draw <= 0.7, axis=1)]
        rows.append(keep)
        have += keep.shape[0]
    return np.vstack(rows)[:n]


def _axes(p, cols):
    basis = np.zeros((p, len(cols)))
    for k, c in enumerate(cols):
        basis[c, k] = 1.0
    return Subspace(basis)


DESIGNS = {
    "ex21": Design(
        design_id="ex21", n_features=2, structural_dim=1,
        truth=_axes(2, [1]), sigma_grid=(0.3,),
        sample=_gaussian(2),
        signal=lambda x: x[:, 1] ** 2,
    ),
    "ex51": Design(
        design_id="ex51", n_features=4, structural_dim=2,
        truth=_axes(4, [0, 1]), sigma_grid=(0.1, 0.4, 0.8),
        sample=_gaussian(4),
        signal=lambda x: x[:, 0] ** 2 + x[:, 1],
    ),
    "ex52": Design(
        design_id="ex52", n_features=4, structural_dim=2,
        truth=_axes(4, [0, 1]), sigma_grid=(0.1, 0.4, 0.8),
        sample=_gaussian(4),
        signal=lambda x: x[:, 0] / (0.5 + (x[:, 1] + 1.5) ** 2)
                         + (1.0 + x[:, 1]) ** 2,
    ),
    "ex53": Design(
        design_id="ex53", n_features=4, structural_dim=1,
        truth=_axes(4, [1]), sigma_grid=(0.1, 0.2, 0.3),
        sample=_notched_cube,
        # one asymmetric arch: rises to its peak near x2 = 0.28, falls to
        # a valley at x2 ~ 0.78, then turns up briefly, so the response
        # is strongly nonlinear yet mostly single-valued in x2
        signal=lambda x: 2.0 * np.sin(np.pi * x[:, 1] + 0.7) ** 2,
    ),
}

PRESETS = {
    "table1": {"designs": ("ex51",), "sigmas": (0.1, 0.4, 0.8),
               "methods": ("gcr", "sir", "save", "phd")},
    "table2": {"designs": ("ex52",), "sigmas": (0.1, 0.4, 0.8),
               "methods": ("gcr", "sir", "save", "phd")},
    "table3": {"designs": ("ex53",), "sigmas": (0.1, 0.2, 0.3),
               "methods": ("gcr", "ols", "sir", "save", "phd")},
}


def _design(design_id):
    try:
        return DESIGNS[design_id]
    except KeyError:
        raise ConfigError(
            f"unknown design {design_id!r}; choose from {', '.join(sorted(DESIGNS))}")


def generate(spec):
    """Draw one sample for a :class:`DesignSpec`.

    Predictors are drawn first, then one standard normal noise vector is
    scaled by sigma and added to the noiseless signal.

    Returns
    -------
    (Dataset, Design)
    """
    design = _design(spec.design_id)
    if spec.n < 2:
        raise ConfigError(f"need n >= 2, got {spec.n}")
    if spec.sigma < 0:
        raise ConfigError(f"sigma must be nonnegative, got {spec.sigma}")
    rng = make_rng(spec.seed)
    x = design.sample(rng, spec.n)
    noise = rng.standard_normal(spec.n)
    y = design.signal(x) + spec.sigma * noise
    return validate_dataset(x, y), design


def run_seed(base_seed, design_id, sigma, run):
    """Child seed for one (design, sigma, run) cell of the harness."""
    return derive_seed(base_seed, design_id, float(sigma), int(run))


@dataclass(frozen=True)
class CellResult:
    """Aggregated accuracy of one method at one (design, sigma) cell."""

    design_id: str
    sigma: float
    method: str
    mean_distance: float
    se: float              # across-run standard deviation, divisor runs-1
    runs: int
    failures: int
    valid: bool            # False when more than 1% of runs failed


@dataclass(frozen=True)
class SimulationReport:
    """All cells of one harness invocation plus the configuration echo."""

    cells: tuple
    config: dict

    def to_rows(self):
        """Serialize cells as dicts in deterministic order."""
        return [
            {
                "design": c.design_id,
                "sigma": c.sigma,
                "method": c.method,
                "mean_distance": c.mean_distance,
                "se": c.se,
                "runs": c.runs,
                "failures": c.failures,
                "valid": c.valid,
            }
            for c in self.cells
        ]


def run_comparison(design_ids, sigmas, methods, runs=500, n=100,
                   base_seed=0, n_slices=10, tube_radius=1.0,
                   gcr_options=None):
    """Monte Carlo comparison of estimators on synthetic designs.

    For every (design, sigma) cell, ``runs`` samples of size ``n`` are
    generated from seeds derived via :func:`run_seed`; all methods fit
    the identical sample within a run.  The score per run is the
    spectral-norm subspace distance to the design truth.  A method run
    that raises a package error is excluded and counted; a cell with
    more than 1% failures is flagged invalid.

    The contour estimators run with ``tube_radius`` (default 1.0 in
    whitened units: wide enough that cylinders capture interior
    witnesses at n ~ 100, which is what lets the tube variance veto
    pairs that straddle a fold of the response surface).  Extra keyword
    options for them go in ``gcr_options``.

    Returns
    -------
    SimulationReport
    """
    design_ids = tuple(design_ids)
    sigmas = tuple(float(s) for s in sigmas)
    methods = tuple(methods)
    if not design_ids:
        raise ConfigError("empty design list")
    if not sigmas:
        raise ConfigError("empty sigma list")
    if not methods:
        raise ConfigError("empty method list")
    if runs < 1:
        raise ConfigError(f"runs must be >= 1, got {runs}")

    cells = []
    for design_id in design_ids:
        design = _design(design_id)
        for sigma in sigmas:
            distances = {m: [] for m in methods}
            failures = {m: 0 for m in methods}
            for r in range(runs):
                spec = DesignSpec(design_id, n, sigma,
                                  run_seed(base_seed, design_id, sigma, r))
                dataset, _ = generate(spec)
                for m in methods:
                    if m in ("sir", "save"):
                        options = {"n_slices": n_slices}
                    elif m == "gcr":
                        options = {"tube_radius": tube_radius}
                        options.update(gcr_options or {})
                    else:
                        options = {}
                    est = build_estimator(
                        m, n_components=design.structural_dim, **options)
                    try:
                        est.fit(dataset.predictors, dataset.response)
                    except ContourRegError:
                        failures[m] += 1
                        continue
                    distances[m].append(
                        subspace_distance(est.directions_, design.truth))
            for m in methods:
                scores = np.asarray(distances[m])
                mean = float(scores.mean()) if scores.size else float("nan")
                se = float(scores.std(ddof=1)) if scores.size > 1 else float("nan")
                cells.append(CellResult(
                    design_id=design_id,
                    sigma=sigma,
                    method=m,
                    mean_distance=mean,
                    se=se,
                    runs=runs,
                    failures=failures[m],
                    valid=failures[m] <= 0.01 * runs,
                ))
    return SimulationReport(
        cells=tuple(cells),
        config={
            "designs": list(design_ids),
            "sigmas": list(sigmas),
            "methods": list(methods),
            "runs": int(runs),
            "n": int(n),
            "base_seed": int(base_seed),
            "n_slices": int(n_slices),
            "tube_radius": float(tube_radius),
            "gcr_options": dict(gcr_options or {}),
        },
    )
