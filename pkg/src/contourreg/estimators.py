"""Central-subspace estimators with a scikit-learn style interface.

Every estimator follows the same pipeline: validate the sample, whiten
the predictors (mean zero, identity ``1/n``-covariance), solve a method
specific eigenproblem in whitened coordinates, then map the chosen
directions back to the original scale with the inverse square root of
the covariance and orthonormalize them.

Fitted attributes shared by all estimators
------------------------------------------
directions_ : ndarray (p, q)
    Orthonormal basis estimate of the central subspace, original scale.
raw_directions_ : ndarray (p, q)
    Unit-normalized directions before orthonormalization; the form used
    when printing coefficients per predictor.
eigenvalues_ : ndarray (p,)
    Full spectrum of the method's kernel matrix, ascending.
mean_, covariance_, inv_sqrt_cov_ : moments of the training predictors.
result_ : EstimatorResult record of all of the above.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .base import (
    EstimatorResult,
    Subspace,
    deterministic_signs,
    orthonormalize,
    validate_dataset,
)
from .contours import accumulate_fhat
from .exceptions import (
    ConfigError,
    ConstantResponseError,
    DimensionMismatchError,
    DimensionTooLargeError,
    NonFiniteEntryError,
    SliceTooSmallError,
    TooManySlicesError,
    UnknownMethodError,
)
from .whitening import whiten

__all__ = [
    "GeneralContourRegression",
    "SimpleContourRegression",
    "OLSDirection",
    "SlicedInverseRegression",
    "SlicedAverageVarianceEstimation",
    "PrincipalHessianDirections",
    "SliceAssignment",
    "slice_response",
    "sir_matrix",
    "save_matrix",
    "phd_matrix",
    "ols_vector",
    "build_estimator",
    "METHOD_NAMES",
]


# --- response slicing and baseline kernels ---------------------------------

@dataclass(frozen=True)
class SliceAssignment:
    """Slice labels (0-based, shape (n,)) and per-slice counts (shape (H,))."""

    labels: np.ndarray
    counts: np.ndarray

    @property
    def n_slices(self):
        return self.counts.size


def slice_response(responses, n_slices=10):
    """Partition observations into response slices of near-equal size.

    Observations are ranked by response with a stable sort (ties keep
    input order); rank r (1-based) lands in slice ceil(r * H / n).  Slice
    sizes differ by at most one and each holds at least two observations.

    Raises
    ------
    ConfigError
        If fewer than two slices are requested.
    TooManySlicesError
        If ``n < 2 * n_slices``.
    """
    y = np.asarray(responses, dtype=np.float64)
    if y.ndim != 1:
        raise DimensionMismatchError("responses must be 1-D")
    h = int(n_slices)
    if h < 2:
        raise ConfigError(f"need at least 2 slices, got {h}")
    n = y.size
    if n < 2 * h:
        raise TooManySlicesError(
            f"{h} slices need at least {2 * h} observations, got {n}")
    order = np.argsort(y, kind="stable")
    ranks = np.arange(1, n + 1)
    labels = np.empty(n, dtype=np.intp)
    labels[order] = (ranks * h + n - 1) // n - 1  # ceil(r*H/n), 0-based
    counts = np.bincount(labels, minlength=h)
    return SliceAssignment(labels=labels, counts=counts)


def _slice_groups(z, assignment):
    n = z.shape[0]
    if assignment.labels.shape != (n,):
        raise DimensionMismatchError("slice labels do not match the sample")
    for h in range(assignment.n_slices):
        rows = z[assignment.labels == h]
        if rows.shape[0] < 2:
            raise SliceTooSmallError(f"slice {h} holds {rows.shape[0]} < 2 rows")
        yield rows


def sir_matrix(z, assignment):
    """Weighted outer products of within-slice means of whitened data."""
    n, p = z.shape
    m = np.zeros((p, p))
    for rows in _slice_groups(z, assignment):
        center = rows.mean(axis=0)
        m += (rows.shape[0] / n) * np.outer(center, center)
    return 0.5 * (m + m.T)


def save_matrix(z, assignment):
    """Weighted squared deviations of within-slice covariances from identity."""
    n, p = z.shape
    eye = np.eye(p)
    m = np.zeros((p, p))
    for rows in _slice_groups(z, assignment):
        centered = rows - rows.mean(axis=0)
        vh = (centered.T @ centered) / rows.shape[0]
        b = eye - vh
        m += (rows.shape[0] / n) * (b @ b)
    return 0.5 * (m + m.T)


def phd_matrix(z, responses, mode="response"):
    """Response- or residual-weighted second moment of whitened data."""
    if mode not in ("response", "residual"):
        raise ConfigError(f"unknown weighting mode {mode!r}")
    y = np.asarray(responses, dtype=np.float64)
    n = z.shape[0]
    w = y - y.mean()
    if mode == "residual":
        beta, *_ = np.linalg.lstsq(z, w, rcond=None)
        w = w - z @ beta
    m = (z.T @ (z * w[:, None])) / n
    return 0.5 * (m + m.T)


def ols_vector(z, responses):
    """Sample covariance vector between whitened predictors and response."""
    y = np.asarray(responses, dtype=np.float64)
    if np.all(y == y[0]):
        raise ConstantResponseError("response is constant; no direction exists")
    return z.T @ (y - y.mean()) / z.shape[0]


# --- estimator classes -----------------------------------------------------

class _SubspaceEstimator(BaseEstimator, TransformerMixin):
    """Shared fit/transform plumbing; subclasses provide ``_solve``."""

    method = None             # short identifier, set per subclass
    eigen_convention = None   # "smallest" or "largest"

    def fit(self, X, y):
        """Estimate the central subspace from predictors ``X`` and response
        ``y``.

        Returns
        -------
        self
        """
        dataset = validate_dataset(X, y)
        q = self._structural_dim(dataset.n_features)
        std = whiten(dataset)
        eigenvalues, picked, extras = self._solve(std, dataset, q)

        raw = std.inv_sqrt_cov @ picked
        self.raw_directions_ = deterministic_signs(
            raw / np.linalg.norm(raw, axis=0))
        self.directions_ = deterministic_signs(orthonormalize(raw))
        self.eigenvalues_ = np.asarray(eigenvalues, dtype=np.float64)
        self.mean_ = std.mean
        self.covariance_ = std.covariance
        self.inv_sqrt_cov_ = std.inv_sqrt_cov
        self.n_features_in_ = dataset.n_features
        for name, value in extras.items():
            setattr(self, name, value)
        self.result_ = EstimatorResult(
            method=self.method,
            subspace=Subspace(self.directions_),
            eigenvalues=self.eigenvalues_,
            raw_directions=self.raw_directions_,
            eigen_convention=self.eigen_convention,
            parameters={"method": self.method, **self.get_params()},
        )
        return self

    def transform(self, X):
        """Coordinates of rows of ``X`` on the fitted directions."""
        if not hasattr(self, "directions_"):
            raise NotFittedError(
                f"{type(self).__name__} must be fitted before calling transform")
        x = np.asarray(X, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.n_features_in_:
            raise DimensionMismatchError(
                f"expected (n, {self.n_features_in_}) input")
        if not np.isfinite(x).all():
            raise NonFiniteEntryError("input contains NaN or infinite entries")
        return x @ self.directions_

    def _structural_dim(self, p):
        q = int(self.n_components)
        if q < 1:
            raise ConfigError(f"n_components must be >= 1, got {q}")
        if q >= p:
            raise DimensionTooLargeError(
                f"n_components={q} must be below the ambient dimension {p}")
        return q

    def _solve(self, std, dataset, q):
        raise NotImplementedError


class _ContourEstimator(_SubspaceEstimator):
    """Shared machinery for contour-pair methods."""

    eigen_convention = "smallest"
    _statistic = None

    def _pair_rule(self, n, q):
        if self.pair_rule == "top":
            if self.n_pairs is None:
                return ("top", 2 * q * n)
            return ("top", int(self.n_pairs))
        if self.pair_rule == "threshold":
            if self.threshold is None:
                raise ConfigError("threshold rule requires a threshold value")
            return ("threshold", float(self.threshold))
        raise ConfigError(f"unknown pair rule {self.pair_rule!r}")

    def _check_geometry(self):
        if self.geometry not in ("standardized", "raw"):
            raise ConfigError(
                f"geometry must be 'standardized' or 'raw', got {self.geometry!r}")

    def _solve(self, std, dataset, q):
        self._check_geometry()
        rule = self._pair_rule(dataset.n_samples, q)
        radius = getattr(self, "tube_radius", None)
        if self._statistic == "tube" and not (radius is not None and radius > 0):
            raise ConfigError(f"tube_radius must be positive, got {radius!r}")
        if self.geometry == "standardized":
            moment = accumulate_fhat(
                std.z, dataset.response,
                statistic=self._statistic, radius=radius, rule=rule)
            kernel = moment.matrix
        else:
            moment = accumulate_fhat(
                dataset.predictors, dataset.response,
                statistic=self._statistic, radius=radius, rule=rule)
            w = std.inv_sqrt_cov
            kernel = w @ moment.matrix @ w
        eigval, eigvec = np.linalg.eigh(0.5 * (kernel + kernel.T))
        picked = eigvec[:, :q]  # smallest eigenvalues carry the signal
        return eigval, picked, {
            "contour_moment_": moment,
            "pair_rule_": rule,
        }


class GeneralContourRegression(_ContourEstimator):
    """Central-subspace estimation from low-variance response tubes.

    For each candidate pair of observations, the response variance over
    all points within ``tube_radius`` of the connecting line measures how
    well the segment hugs a level set of the regression function.  Pairs
    passing the selection rule contribute the outer product of their
    difference; directions orthogonal to the accumulated spread span the
    estimated subspace.

    Parameters
    ----------
    n_components : int, default 1
        Structural dimension q of the estimated subspace (q < p).
    tube_radius : float, default 0.01
        Cylinder radius, measured in whitened units when
        ``geometry="standardized"`` and in raw units otherwise.
    pair_rule : {"top", "threshold"}, default "top"
        ``"top"`` keeps the ``n_pairs`` smallest tube variances;
        ``"threshold"`` keeps every pair with variance <= ``threshold``.
    n_pairs : int, optional
        Pair budget for the ``"top"`` rule; defaults to ``2 * q * n``.
    threshold : float, optional
        Cutoff for the ``"threshold"`` rule.
    geometry : {"standardized", "raw"}, default "standardized"
        Space in which segments, tubes, and distances are measured.
    """

    method = "gcr"
    _statistic = "tube"

    def __init__(self, n_components=1, tube_radius=0.01, pair_rule="top",
                 n_pairs=None, threshold=None, geometry="standardized"):
        self.n_components = n_components
        self.tube_radius = tube_radius
        self.pair_rule = pair_rule
        self.n_pairs = n_pairs
        self.threshold = threshold
        self.geometry = geometry


class SimpleContourRegression(_ContourEstimator):
    """Contour estimation from pairs with nearly equal responses.

    Identical to :class:`GeneralContourRegression` except that pairs are
    scored by the absolute response difference of their endpoints rather
    than by the tube variance, so no radius is involved.
    """

    method = "scr"
    _statistic = "gap"

    def __init__(self, n_components=1, pair_rule="top", n_pairs=None,
                 threshold=None, geometry="standardized"):
        self.n_components = n_components
        self.pair_rule = pair_rule
        self.n_pairs = n_pairs
        self.threshold = threshold
        self.geometry = geometry


class OLSDirection(_SubspaceEstimator):
    """Single linear-trend direction from the predictor-response covariance.

    The direction is the sample covariance vector between whitened
    predictors and the response, mapped back to the original scale
    (equivalently the usual least-squares coefficient vector up to scale).
    The recorded spectrum is zero except for the squared norm of the
    whitened covariance vector in the last slot.
    """

    method = "ols"
    eigen_convention = "largest"
    n_components = 1  # a covariance vector spans one direction

    def __init__(self):
        pass

    def _structural_dim(self, p):
        if p < 2:
            raise DimensionTooLargeError("need at least 2 predictors")
        return 1

    def _solve(self, std, dataset, q):
        bz = ols_vector(std.z, std.response)
        eigval = np.zeros(std.z.shape[1])
        eigval[-1] = float(bz @ bz)
        return eigval, bz[:, None], {"z_covariance_": bz}


class _SlicedEstimator(_SubspaceEstimator):
    eigen_convention = "largest"

    def __init__(self, n_components=1, n_slices=10):
        self.n_components = n_components
        self.n_slices = n_slices

    def _kernel(self, z, assignment):
        raise NotImplementedError

    def _solve(self, std, dataset, q):
        assignment = slice_response(std.response, self.n_slices)
        kernel = self._kernel(std.z, assignment)
        eigval, eigvec = np.linalg.eigh(kernel)
        picked = eigvec[:, ::-1][:, :q]  # largest eigenvalues first
        return eigval, picked, {
            "slice_assignment_": assignment,
            "kernel_": kernel,
        }


class SlicedInverseRegression(_SlicedEstimator):
    """Directions of maximal spread of within-slice predictor means.

    Parameters
    ----------
    n_components : int, default 1
    n_slices : int, default 10
        Number of near-equal-count response slices.
    """

    method = "sir"

    def _kernel(self, z, assignment):
        return sir_matrix(z, assignment)


class SlicedAverageVarianceEstimation(_SlicedEstimator):
    """Directions where within-slice covariances deviate most from identity.

    Picks up both linear and purely symmetric (e.g. quadratic) structure
    that mean-based slicing can miss.
    """

    method = "save"

    def _kernel(self, z, assignment):
        return save_matrix(z, assignment)


class PrincipalHessianDirections(_SubspaceEstimator):
    """Directions of curvature from a response-weighted second moment.

    Parameters
    ----------
    n_components : int, default 1
    mode : {"response", "residual"}, default "response"
        Weight each whitened outer product by the centered response or by
        the residual from a linear fit.  Components are chosen by largest
        absolute eigenvalue; the recorded spectrum keeps signs.
    """

    method = "phd"
    eigen_convention = "largest"

    def __init__(self, n_components=1, mode="response"):
        self.n_components = n_components
        self.mode = mode

    def _solve(self, std, dataset, q):
        kernel = phd_matrix(std.z, std.response, mode=self.mode)
        eigval, eigvec = np.linalg.eigh(kernel)
        order = np.argsort(-np.abs(eigval), kind="stable")
        picked = eigvec[:, order[:q]]
        return eigval, picked, {"kernel_": kernel}


# --- method registry --------------------------------------------------------

METHOD_NAMES = ("gcr", "scr", "ols", "sir", "save", "phd")

_METHOD_CLASSES = {
    "gcr": GeneralContourRegression,
    "scr": SimpleContourRegression,
    "ols": OLSDirection,
    "sir": SlicedInverseRegression,
    "save": SlicedAverageVarianceEstimation,
    "phd": PrincipalHessianDirections,
}


def build_estimator(method, n_components=1, **options):
    """Construct an estimator by its short method name.

    Unknown names raise :class:`UnknownMethodError`; options not accepted
    by the chosen method raise :class:`ConfigError`.
    """
    key = str(method).lower()
    cls = _METHOD_CLASSES.get(key)
    if cls is None:
        raise UnknownMethodError(
            f"unknown method {method!r}; choose from {', '.join(METHOD_NAMES)}")
    if key == "ols":
        if int(n_components) != 1:
            raise ConfigError("ols estimates exactly one direction")
        kwargs = {}
    else:
        kwargs = {"n_components": n_components}
    allowed = set(cls().get_params() if key == "ols" else cls(**kwargs).get_params())
    bad = set(options) - allowed
    if bad:
        raise ConfigError(
            f"method {key!r} does not accept: {', '.join(sorted(bad))}")
    kwargs.update(options)
    return cls(**kwargs)
