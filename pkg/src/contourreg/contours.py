"""Pairwise contour geometry and the empirical direction matrix.

The central object is a weighted second moment of point differences:
pairs whose connecting segment stays inside a low-response-variation
region contribute their outer product, and directions along which the
response varies least end up dominating the small-eigenvalue end of the
spectrum.  Candidate pairs (i, j) with j < i are always enumerated in
lexicographic order, and the accumulation below follows that order
exactly so that results are reproducible bit for bit.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .exceptions import (
    ConfigError,
    DegeneratePairError,
    DimensionMismatchError,
    EmptyAfterDegenerateError,
    NoPairsSelectedError,
    TooFewRowsError,
)

__all__ = [
    "line_distance",
    "cylinder_members",
    "tube_variance",
    "pair_statistics",
    "select_pairs",
    "accumulate_fhat",
    "ContourMoment",
]

# Anchor points closer than this are treated as a degenerate pair.
DEGENERATE_NORM = 1e-12


def _as_points(points):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionMismatchError(f"points must be (n, p), got ndim={pts.ndim}")
    return pts


def _base_geometry(points, i):
    # differences and squared norms relative to anchor row i; the row sums
    # reduce left to right so scalar recomputation gives identical bits
    diffs = points - points[i]
    sq = (diffs * diffs).sum(axis=1)
    return diffs, sq


def _cross_products(diffs, i):
    # t[k, j] = diffs[k] . diffs[j] for j < i, accumulated component by
    # component in index order to mirror a scalar np.sum of the products
    n, p = diffs.shape
    t = np.zeros((n, i))
    for c in range(p):
        t += diffs[:, c, None] * diffs[None, :i, c]
    return t


def line_distance(point, start, end):
    """Euclidean distance from ``point`` to the infinite line through
    ``start`` and ``end``.

    Uses the projection identity
    ``d^2 = |x - a|^2 - ((x - a) . u)^2 / |u|^2`` with ``u = b - a``,
    clamped at zero before the square root.

    Raises
    ------
    DegeneratePairError
        If ``|end - start| <= 1e-12``.
    """
    x = np.asarray(point, dtype=np.float64)
    a = np.asarray(start, dtype=np.float64)
    b = np.asarray(end, dtype=np.float64)
    if not x.shape == a.shape == b.shape or x.ndim != 1:
        raise DimensionMismatchError("point, start, end must be 1-D and equal length")
    u = b - a
    uu = float(np.sum(u * u))
    if np.sqrt(uu) <= DEGENERATE_NORM:
        raise DegeneratePairError("line anchors coincide")
    dx = x - a
    t = float(np.sum(dx * u))
    d2 = float(np.sum(dx * dx)) - t * t / uu
    return float(np.sqrt(max(d2, 0.0)))


def cylinder_members(points, i, j, radius):
    """Indices of all rows strictly within ``radius`` of the line through
    rows ``i`` and ``j``.

    The anchors themselves always qualify (their distances are zero up to
    roundoff).  Returned indices are sorted ascending.
    """
    pts = _as_points(points)
    if not radius > 0.0:
        raise ConfigError(f"radius must be positive, got {radius!r}")
    diffs, sq = _base_geometry(pts, i)
    uu = sq[j]
    if np.sqrt(uu) <= DEGENERATE_NORM:
        raise DegeneratePairError(f"rows {i} and {j} coincide")
    t = np.zeros(pts.shape[0])
    for c in range(pts.shape[1]):
        t += diffs[:, c] * diffs[j, c]
    d2 = sq - (t * t) / uu
    d = np.sqrt(np.maximum(d2, 0.0))
    return np.nonzero(d < radius)[0]


def tube_variance(points, responses, i, j, radius):
    """Response variance (``1/count`` divisor) over the members of the
    radius-``radius`` cylinder around the segment (i, j)."""
    y = np.asarray(responses, dtype=np.float64)
    members = cylinder_members(points, i, j, radius)
    yc = y[members]
    center = yc.mean()
    return float(((yc - center) ** 2).mean())


def pair_statistics(points, responses, statistic="tube", radius=None):
    """Per-pair selection statistic for every candidate pair.

    Parameters
    ----------
    points : ndarray (n, p)
    responses : ndarray (n,)
    statistic : {"tube", "gap"}
        ``"tube"``: response variance over the cylinder around each pair
        (requires ``radius``).  ``"gap"``: absolute response difference of
        the pair itself.
    radius : float, optional
        Cylinder radius for the ``"tube"`` statistic.

    Returns
    -------
    (stats, degenerate) : ndarray of shape (n*(n-1)/2,), int
        Statistics in lexicographic (i, j) pair order; degenerate pairs
        (coincident rows) hold NaN and are tallied in ``degenerate``.
    """
    pts = _as_points(points)
    y = np.asarray(responses, dtype=np.float64)
    n = pts.shape[0]
    if y.shape != (n,):
        raise DimensionMismatchError("responses must be 1-D with one value per row")
    if statistic not in ("tube", "gap"):
        raise ConfigError(f"unknown statistic {statistic!r}")
    if statistic == "tube" and not (radius is not None and radius > 0.0):
        raise ConfigError("the tube statistic requires a positive radius")

    stats = np.full(n * (n - 1) // 2, np.nan)
    degenerate = 0
    for i in range(1, n):
        base = i * (i - 1) // 2
        if statistic == "gap":
            seg = pts[:i] - pts[i]
            sq = (seg * seg).sum(axis=1)
            good = np.sqrt(sq) > DEGENERATE_NORM
            gaps = np.abs(y[:i] - y[i])
            stats[base:base + i][good] = gaps[good]
            degenerate += int(np.count_nonzero(~good))
            continue

        diffs, sq = _base_geometry(pts, i)
        uu = sq[:i]
        good = np.sqrt(uu) > DEGENERATE_NORM
        degenerate += int(np.count_nonzero(~good))
        with np.errstate(divide="ignore", invalid="ignore"):
            t = _cross_products(diffs, i)
            d2 = sq[:, None] - (t * t) / uu[None, :]
            d = np.sqrt(np.maximum(d2, 0.0))
            inside = d < radius
        for j in np.nonzero(good)[0]:
            yc = y[inside[:, j]]
            center = yc.mean()
            stats[base + j] = ((yc - center) ** 2).mean()
    return stats, degenerate


def select_pairs(ii, jj, stats, rule):
    """Apply a pair-selection rule to precomputed statistics.

    Parameters
    ----------
    ii, jj : ndarray
        Pair indices in lexicographic order (as from ``np.tril_indices``).
    stats : ndarray
        Matching statistics; NaN marks degenerate pairs.
    rule : tuple
        ``("threshold", c)`` keeps pairs with statistic <= c.
        ``("top", m)`` keeps the m smallest statistics, ties broken by
        lexicographic (i, j); m may not exceed the candidate count.

    Returns
    -------
    ndarray of selected positions, ascending (lexicographic pair order).
    """
    try:
        kind, value = rule
    except (TypeError, ValueError):
        raise ConfigError(f"pair rule must be a (kind, value) tuple, got {rule!r}")
    valid = np.nonzero(np.isfinite(stats))[0]
    if kind == "threshold":
        keep = valid[stats[valid] <= float(value)]
        if keep.size == 0:
            raise NoPairsSelectedError(
                f"threshold {value} admits none of the {valid.size} candidate pairs")
        return keep
    if kind == "top":
        m = int(value)
        if m < 1:
            raise ConfigError("pair budget must be at least 1")
        if m > stats.size:
            raise ConfigError(
                f"pair budget {m} exceeds the {stats.size} candidate pairs")
        order = np.lexsort((jj[valid], ii[valid], stats[valid]))
        return np.sort(valid[order[:min(m, valid.size)]])
    raise ConfigError(f"unknown pair rule kind {kind!r}")


@dataclass(frozen=True)
class ContourMoment:
    """Accumulated second moment of the selected pair differences.

    Attributes
    ----------
    matrix : ndarray (p, p)
        Sum of outer products of selected differences divided by the total
        candidate count C(n, 2); symmetric positive semidefinite.
    pairs_used : int
        Number of pairs that passed the selection rule.
    degenerate_pairs : int
        Candidate pairs skipped because their rows coincide.
    pair_stats : ndarray (pairs_used, 3)
        Selected pairs as (i, j, statistic) rows in lexicographic order.
    """

    matrix: np.ndarray
    pairs_used: int
    degenerate_pairs: int
    pair_stats: np.ndarray


def accumulate_fhat(points, responses, statistic="tube", radius=None, rule=None):
    """Accumulate the selected-pair difference moment.

    Runs the full candidate enumeration: statistics for every pair in
    lexicographic order, selection by ``rule``, then sequential
    accumulation of outer products in that same order.

    Raises
    ------
    EmptyAfterDegenerateError
        If every candidate pair is degenerate.
    NoPairsSelectedError
        If a threshold rule admits no pair.
    """
    pts = _as_points(points)
    y = np.asarray(responses, dtype=np.float64)
    n, p = pts.shape
    if n < 2:
        raise TooFewRowsError(f"need at least 2 rows, got {n}")
    if rule is None:
        raise ConfigError("a pair-selection rule is required")
    stats, degenerate = pair_statistics(pts, y, statistic=statistic, radius=radius)
    if degenerate == stats.size:
        raise EmptyAfterDegenerateError(
            f"all {stats.size} candidate pairs are degenerate")
    ii, jj = np.tril_indices(n, -1)
    sel = select_pairs(ii, jj, stats, rule)
    f = np.zeros((p, p))
    for k in sel:
        u = pts[jj[k]] - pts[ii[k]]
        f += np.outer(u, u)
    f /= comb(n, 2)
    return ContourMoment(
        matrix=f,
        pairs_used=int(sel.size),
        degenerate_pairs=int(degenerate),
        pair_stats=np.column_stack(
            (ii[sel].astype(np.float64), jj[sel].astype(np.float64), stats[sel])),
    )
