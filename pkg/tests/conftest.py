"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from contourreg import make_rng


def random_orthonormal(rng, p, d):
    """Orthonormal (p, d) basis drawn from the rotation-invariant measure."""
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    q = q * np.sign(np.diag(r))  # fix QR sign ambiguity
    return q[:, :d]


def write_csv(path, header, matrix):
    """Write a headed CSV with full-precision floats; returns the path."""
    lines = [",".join(header)]
    for row in np.atleast_2d(matrix):
        lines.append(",".join(f"{float(v):.17g}" for v in row))
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture
def rng():
    return make_rng(20260814)
