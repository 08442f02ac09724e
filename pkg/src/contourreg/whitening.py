"""Sample moments and covariance whitening.

Every estimator in this package standardizes predictors through the same
pipeline: sample mean, sample covariance with divisor ``1/n``, and the
symmetric inverse square root of that covariance.
"""

from dataclasses import dataclass

import numpy as np

from .base import Dataset, validate_dataset
from .exceptions import SingularCovarianceError

__all__ = ["sample_moments", "inverse_sqrt", "whiten", "StandardizedData"]

# Relative eigenvalue floor below which the covariance is treated as singular.
SINGULAR_RTOL = 1e-10


def sample_moments(predictors):
    """Sample mean and covariance of the rows of ``predictors``.

    The covariance uses the ``1/n`` divisor, not ``1/(n-1)``, and is
    symmetrized exactly.

    Returns
    -------
    (mean, cov) : ndarray (p,), ndarray (p, p)
    """
    x = np.asarray(predictors, dtype=np.float64)
    n = x.shape[0]
    mean = x.mean(axis=0)
    xc = x - mean
    cov = (xc.T @ xc) / n
    cov = 0.5 * (cov + cov.T)
    return mean, cov


def inverse_sqrt(cov):
    """Symmetric inverse square root of a covariance matrix.

    Parameters
    ----------
    cov : ndarray of shape (p, p), symmetric positive definite.

    Returns
    -------
    ndarray of shape (p, p): W with ``W @ cov @ W == I`` up to roundoff.

    Raises
    ------
    SingularCovarianceError
        If the smallest eigenvalue is at or below ``1e-10`` times the
        largest, or the matrix has no positive eigenvalue at all.
    """
    s = np.asarray(cov, dtype=np.float64)
    eigval, eigvec = np.linalg.eigh(s)
    largest = eigval[-1]
    if largest <= 0.0 or eigval[0] <= SINGULAR_RTOL * largest:
        raise SingularCovarianceError(
            f"covariance is numerically singular (eigenvalue range "
            f"[{eigval[0]:.3e}, {largest:.3e}])")
    w = (eigvec * (1.0 / np.sqrt(eigval))) @ eigvec.T
    return 0.5 * (w + w.T)


@dataclass(frozen=True)
class StandardizedData:
    """A whitened sample and the moments that produced it.

    ``z`` has zero column means and identity ``1/n``-covariance up to
    roundoff; ``inv_sqrt_cov`` maps whitened directions back to the original
    scale.
    """

    z: np.ndarray
    mean: np.ndarray
    covariance: np.ndarray
    inv_sqrt_cov: np.ndarray
    response: np.ndarray


def whiten(dataset):
    """Whiten a dataset's predictors: ``z_i = W (x_i - mean)``.

    Parameters
    ----------
    dataset : Dataset, or any (predictors, response) pair accepted by
        :func:`validate_dataset`.

    Returns
    -------
    StandardizedData
    """
    if not isinstance(dataset, Dataset):
        dataset = validate_dataset(*dataset)
    mean, cov = sample_moments(dataset.predictors)
    w = inverse_sqrt(cov)
    z = (dataset.predictors - mean) @ w
    return StandardizedData(
        z=z,
        mean=mean,
        covariance=cov,
        inv_sqrt_cov=w,
        response=dataset.response,
    )
