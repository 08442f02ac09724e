"""Subspace comparison and spectrum diagnostics."""

from dataclasses import dataclass

import numpy as np

from .base import Subspace, check_same_ambient
from .exceptions import ConfigError, DataError

__all__ = ["subspace_distance", "scree", "ScreeReport"]


def subspace_distance(first, second):
    """Spectral-norm distance between two subspaces of the same R^p.

    Computes ``||P1 - P2||_2`` where ``P`` is the orthogonal projection
    onto each subspace, via the symmetric eigendecomposition of the
    difference.  This is a metric; it ranges over [0, sqrt(2)] in general
    and over [0, 1] when both subspaces have equal dimension.

    Parameters
    ----------
    first, second : Subspace or ndarray with orthonormal columns.

    Raises
    ------
    AmbientMismatchError
        If the ambient dimensions differ.
    """
    a = first if isinstance(first, Subspace) else Subspace(first)
    b = second if isinstance(second, Subspace) else Subspace(second)
    check_same_ambient(a.basis, b.basis)
    delta = a.projection() - b.projection()
    eigval = np.linalg.eigvalsh(delta)
    return float(np.max(np.abs(eigval)))


@dataclass(frozen=True)
class ScreeReport:
    """Largest-ratio-gap reading of an ascending spectrum.

    ``suggested_q`` is an advisory heuristic, not an inference procedure:
    it counts eigenvalues on the signal side of the largest consecutive
    ratio.  ``flat`` marks spectra whose ratios show no separation at
    all, in which case the suggestion falls back to 1.
    """

    eigenvalues: np.ndarray
    gaps: np.ndarray
    suggested_q: int
    convention: str
    flat: bool


def scree(eigenvalues, convention="smallest"):
    """Suggest a structural dimension from eigenvalue ratio gaps.

    Parameters
    ----------
    eigenvalues : array-like, ascending and nonnegative.
        Pass magnitudes for kernels with signed spectra.
    convention : {"smallest", "largest"}
        ``"smallest"`` when the informative directions sit at the small
        end of the spectrum (contour methods): the suggestion counts the
        eigenvalues below the largest gap.  ``"largest"`` flips the count
        for moment baselines whose signal sits at the top.

    Returns
    -------
    ScreeReport
    """
    ev = np.asarray(eigenvalues, dtype=np.float64)
    if ev.ndim != 1 or ev.size < 2:
        raise ConfigError("need a 1-D spectrum with at least 2 eigenvalues")
    if not np.isfinite(ev).all():
        raise DataError("spectrum contains non-finite values")
    if np.any(np.diff(ev) < 0):
        raise DataError("eigenvalues must be sorted ascending")
    tiny = -1e-10 * max(float(np.abs(ev).max()), 1.0)
    if ev[0] < tiny:
        raise DataError(
            "spectrum has negative eigenvalues; pass magnitudes instead")
    if convention not in ("smallest", "largest"):
        raise ConfigError(f"unknown convention {convention!r}")
    clipped = np.maximum(ev, 0.0)
    gaps = clipped[1:] / np.maximum(clipped[:-1], 1e-300)
    flat = bool(np.max(gaps) - np.min(gaps) <= 1e-9)
    if flat:
        suggested = 1
    else:
        k = int(np.argmax(gaps))  # gap between positions k and k+1 (0-based)
        below = k + 1
        suggested = below if convention == "smallest" else ev.size - below
    return ScreeReport(
        eigenvalues=ev,
        gaps=gaps,
        suggested_q=int(suggested),
        convention=convention,
        flat=flat,
    )
