"""Contour-based sufficient dimension reduction with classical baselines.

The package estimates the central subspace of a regression: the smallest
subspace of predictor space that carries all information about the
response.  The main estimator scores pairs of observations by the
response variance inside a thin tube around their connecting segment,
accumulates the difference directions of well-scoring pairs, and reads
the subspace off the small end of the resulting spectrum.  Classical
moment-based baselines (OLS direction, sliced inverse regression, sliced
average variance estimation, principal Hessian directions) share the
same whitening pipeline, and a seeded Monte Carlo harness compares all
methods on synthetic designs with known truth.
"""

from .base import (
    Dataset,
    EstimatorResult,
    Subspace,
    derive_seed,
    make_rng,
    orthonormalize,
    validate_dataset,
)
from .contours import (
    ContourMoment,
    accumulate_fhat,
    cylinder_members,
    line_distance,
    pair_statistics,
    select_pairs,
    tube_variance,
)
from .estimators import (
    METHOD_NAMES,
    GeneralContourRegression,
    OLSDirection,
    PrincipalHessianDirections,
    SimpleContourRegression,
    SliceAssignment,
    SlicedAverageVarianceEstimation,
    SlicedInverseRegression,
    build_estimator,
    ols_vector,
    phd_matrix,
    save_matrix,
    sir_matrix,
    slice_response,
)
from .metrics import ScreeReport, scree, subspace_distance
from .simulation import (
    DESIGNS,
    PRESETS,
    CellResult,
    Design,
    DesignSpec,
    SimulationReport,
    generate,
    run_comparison,
    run_seed,
)
from .whitening import StandardizedData, inverse_sqrt, sample_moments, whiten
from . import exceptions

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "EstimatorResult",
    "Subspace",
    "derive_seed",
    "make_rng",
    "orthonormalize",
    "validate_dataset",
    "ContourMoment",
    "accumulate_fhat",
    "cylinder_members",
    "line_distance",
    "pair_statistics",
    "select_pairs",
    "tube_variance",
    "METHOD_NAMES",
    "GeneralContourRegression",
    "SimpleContourRegression",
    "OLSDirection",
    "SlicedInverseRegression",
    "SlicedAverageVarianceEstimation",
    "PrincipalHessianDirections",
    "SliceAssignment",
    "build_estimator",
    "ols_vector",
    "phd_matrix",
    "save_matrix",
    "sir_matrix",
    "slice_response",
    "ScreeReport",
    "scree",
    "subspace_distance",
    "DESIGNS",
    "PRESETS",
    "CellResult",
    "Design",
    "DesignSpec",
    "SimulationReport",
    "generate",
    "run_comparison",
    "run_seed",
    "StandardizedData",
    "inverse_sqrt",
    "sample_moments",
    "whiten",
    "exceptions",
    "__version__",
]
