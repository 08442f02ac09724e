"""Shared data containers, input validation, and deterministic randomness."""

from dataclasses import dataclass, field
from zlib import crc32

import numpy as np

from .exceptions import (
    AmbientMismatchError,
    DimensionMismatchError,
    NonFiniteEntryError,
    RankDeficientError,
    TooFewRowsError,
)

__all__ = [
    "Dataset",
    "Subspace",
    "EstimatorResult",
    "validate_dataset",
    "orthonormalize",
    "deterministic_signs",
    "derive_seed",
    "make_rng",
]

# Columns are considered dependent when the residual after projection falls
# below this fraction of the largest input column norm.
RANK_TOL = 1e-10


@dataclass(frozen=True)
class Dataset:
    """A validated regression sample: predictors (n, p) and response (n,).

    Instances are produced by :func:`validate_dataset`; arrays are float64,
    C-contiguous, and free of non-finite entries.  Treat them as read-only.
    """

    predictors: np.ndarray
    response: np.ndarray

    @property
    def n_samples(self):
        return self.predictors.shape[0]

    @property
    def n_features(self):
        return self.predictors.shape[1]


def validate_dataset(predictors, response):
    """Coerce raw arrays into a :class:`Dataset`, rejecting malformed input.

    Parameters
    ----------
    predictors : array-like of shape (n, p)
    response : array-like of shape (n,)

    Returns
    -------
    Dataset

    Raises
    ------
    DimensionMismatchError
        If ``predictors`` is not 2-D, ``response`` is not 1-D, or their row
        counts disagree.
    NonFiniteEntryError
        If any entry is NaN or infinite.
    TooFewRowsError
        If fewer than two rows are provided.
    """
    x = np.ascontiguousarray(predictors, dtype=np.float64)
    y = np.ascontiguousarray(response, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionMismatchError(
            f"predictors must be 2-D (n, p), got ndim={x.ndim}")
    if y.ndim != 1:
        raise DimensionMismatchError(
            f"response must be 1-D (n,), got ndim={y.ndim}")
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatchError(
            f"row mismatch: {x.shape[0]} predictor rows vs "
            f"{y.shape[0]} response values")
    if x.shape[0] < 2:
        raise TooFewRowsError(f"need at least 2 rows, got {x.shape[0]}")
    if x.shape[1] < 1:
        raise DimensionMismatchError("predictors must have at least 1 column")
    if not np.isfinite(x).all():
        raise NonFiniteEntryError("predictors contain NaN or infinite entries")
    if not np.isfinite(y).all():
        raise NonFiniteEntryError("response contains NaN or infinite entries")
    return Dataset(predictors=x, response=y)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^p held as an orthonormal basis matrix (p, d)."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.float64)
        if b.ndim == 1:
            b = b[:, None]  # a bare vector means a one-dimensional subspace
        if b.ndim != 2:
            raise DimensionMismatchError(f"basis must be 2-D, got ndim={b.ndim}")
        object.__setattr__(self, "basis", b)
        p, d = b.shape
        if not 1 <= d <= p:
            raise DimensionMismatchError(
                f"basis must be (p, d) with 1 <= d <= p, got {b.shape}")
        gram = b.T @ b
        if np.max(np.abs(gram - np.eye(d))) > 1e-10:
            raise RankDeficientError("basis columns are not orthonormal")

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    def projection(self):
        """Orthogonal projection matrix (p, p) onto the subspace."""
        return self.basis @ self.basis.T


@dataclass(frozen=True)
class EstimatorResult:
    """Output record shared by every subspace estimator.

    Attributes
    ----------
    method : str
        Short identifier such as ``"gcr"`` or ``"sir"``.
    subspace : Subspace
        Orthonormalized estimate of the central subspace, original scale.
    eigenvalues : ndarray of shape (p,)
        Full spectrum of the method's kernel matrix, sorted ascending.
    raw_directions : ndarray of shape (p, d)
        Unit-normalized direction vectors before orthonormalization, in
        original predictor units (the form used for printed coefficients).
    eigen_convention : str
        ``"smallest"`` when informative directions pair with the smallest
        eigenvalues, ``"largest"`` otherwise.  Consumed by scree diagnostics.
    parameters : dict
        Echo of the fitting configuration.
    """

    method: str
    subspace: Subspace
    eigenvalues: np.ndarray
    raw_directions: np.ndarray
    eigen_convention: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", ev)


def orthonormalize(columns, tol=RANK_TOL):
    """Orthonormalize matrix columns by sequential projection.

    Gram-Schmidt with a second projection pass for stability.  The span is
    preserved; columns are processed left to right.

    Parameters
    ----------
    columns : array-like of shape (p, d) or (p,)
    tol : float
        Relative rank tolerance: a column whose residual norm falls at or
        below ``tol`` times the largest input column norm is dependent.

    Returns
    -------
    ndarray of shape (p, d) with orthonormal columns.

    Raises
    ------
    RankDeficientError
        If the columns do not have full rank ``d`` within tolerance.
    """
    m = np.asarray(columns, dtype=np.float64)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got ndim={m.ndim}")
    p, d = m.shape
    if d > p:
        raise RankDeficientError(f"{d} columns cannot be independent in R^{p}")
    scale = float(np.max(np.linalg.norm(m, axis=0))) if d else 0.0
    out = np.empty((p, d))
    for k in range(d):
        v = m[:, k].copy()
        for _ in range(2):  # second pass removes leaked components
            for i in range(k):
                v -= (out[:, i] @ v) * out[:, i]
        nrm = float(np.linalg.norm(v))
        if nrm <= tol * scale:
            raise RankDeficientError(
                f"column {k} is linearly dependent on earlier columns")
        out[:, k] = v / nrm
    return out


def deterministic_signs(vectors):
    """Flip each column so its first component above 1e-12 is positive.

    Eigenvector signs are arbitrary; this pins them for reproducibility.
    """
    v = np.array(vectors, dtype=np.float64, copy=True)
    if v.ndim == 1:
        v = v[:, None]
    for k in range(v.shape[1]):
        nz = np.nonzero(np.abs(v[:, k]) > 1e-12)[0]
        if nz.size and v[nz[0], k] < 0:
            v[:, k] = -v[:, k]
    return v


def check_same_ambient(a, b):
    """Raise :class:`AmbientMismatchError` unless both live in the same R^p."""
    if a.shape[0] != b.shape[0]:
        raise AmbientMismatchError(
            f"ambient dimensions differ: {a.shape[0]} vs {b.shape[0]}")


# --- deterministic randomness ---------------------------------------------

def _key_to_int(key):
    # stable 64-bit encoding for ints, floats, and strings
    if isinstance(key, (int, np.integer)):
        return int(key) & 0xFFFFFFFFFFFFFFFF
    if isinstance(key, (float, np.floating)):
        return int(np.float64(key).view(np.uint64))
    if isinstance(key, str):
        return crc32(key.encode("utf-8"))
    raise TypeError(f"cannot derive a seed from {type(key).__name__}")


def derive_seed(base_seed, *keys):
    """Mix a base seed with task keys into a fresh 64-bit child seed.

    Equal inputs give equal outputs on every platform; distinct key tuples
    give statistically independent streams.
    """
    entropy = [_key_to_int(base_seed)] + [_key_to_int(k) for k in keys]
    ss = np.random.SeedSequence(entropy)
    return int(ss.generate_state(1, np.uint64)[0])


def make_rng(seed):
    """Construct the package-wide random generator for a 64-bit seed."""
    return np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
