"""Exact bottleneck distance between finite persistence diagrams."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .persistence import PersistenceDiagram


def _as_points(dgm) -> NDArray[np.float64]:
    if isinstance(dgm, PersistenceDiagram):
        return dgm.points
    pts = np.asarray(dgm, dtype=np.float64)
    return pts.reshape(-1, 2)


def _saturates(adjacency: NDArray[np.bool_]) -> bool:
    """True if every row of the bipartite graph can be matched."""
    rows, cols = adjacency.shape
    if rows == 0:
        return True
    if rows > cols or not adjacency.any(axis=1).all():
        return False
    graph = csr_matrix(adjacency.astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck_distance(dgm_a, dgm_b) -> float:
    """Bottleneck distance with the L-infinity ground metric.

    Either diagram may be a :class:`PersistenceDiagram` or a ``(k, 2)`` array
    of (birth, death) points. Points may be matched to the diagonal at cost
    ``(death - birth) / 2``.

    The answer is one of the pairwise point distances or a point-to-diagonal
    distance, so it is found by binary search over those candidates. For a
    candidate ``eps`` a matching exists iff the points of ``a`` farther than
    ``eps`` from the diagonal can all be matched into ``b`` and, separately,
    the far points of ``b`` into ``a`` (Mendelsohn-Dulmage); each side is a
    maximum bipartite matching (Hopcroft-Karp).
    """
    a = _as_points(dgm_a)
    b = _as_points(dgm_b)
    diag_a = (a[:, 1] - a[:, 0]) / 2.0
    diag_b = (b[:, 1] - b[:, 0]) / 2.0
    if len(a) == 0 or len(b) == 0:
        return float(max(diag_a.max(initial=0.0), diag_b.max(initial=0.0)))

    cross = np.maximum(
        np.abs(a[:, None, 0] - b[None, :, 0]),
        np.abs(a[:, None, 1] - b[None, :, 1]),
    )
    candidates = np.unique(np.concatenate([cross.ravel(), diag_a, diag_b]))

    # any feasible value is at least the largest unavoidable diagonal gap
    # difference, so skip candidates below it
    floor = max(0.0, diag_a.max() - diag_b.max(), diag_b.max() - diag_a.max())
    candidates = candidates[np.searchsorted(candidates, floor, side="left"):]

    def feasible(eps: float) -> bool:
        near = cross <= eps
        far_a = diag_a > eps
        far_b = diag_b > eps
        return _saturates(near[far_a]) and _saturates(near[:, far_b].T)

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])
