"""Zero-dimensional sublevel-set persistence of sampled 1-D functions.

The samples are joined by straight segments and the first and last edges are
continued as rays, so the boundary samples are never critical points. A
boundary sample that is a local minimum therefore belongs to a ray descending
to ``-inf`` and is recorded with height ``-inf``; a boundary local maximum is
recorded with height ``+inf``.

Pairs are found by repeatedly cancelling the adjacent (minimum, maximum) pair
with the smallest height gap. A 4-ary heap with lazy deletion keeps the whole
computation at O(n log n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numba
import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import OracleSizeExceeded, SeriesTooShort
from .series import TimeSeries, as_series

MIN = "min"
MAX = "max"

BRUTEFORCE_MAX_SAMPLES = 10_000


class Extremum(NamedTuple):
    index: int
    height: float
    kind: str


class PersistencePair(NamedTuple):
    birth: float
    death: float
    birth_index: int
    death_index: int

    @property
    def lifetime(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class ExtremaList:
    """Alternating local extrema of a series, boundary sentinels included."""

    indices: NDArray[np.int64] = field(repr=False)
    heights: NDArray[np.float64] = field(repr=False)
    is_max: NDArray[np.bool_] = field(repr=False)

    def __len__(self) -> int:
        return self.indices.shape[0]

    @property
    def entries(self) -> list[Extremum]:
        return [
            Extremum(int(i), float(h), MAX if m else MIN)
            for i, h, m in zip(self.indices, self.heights, self.is_max)
        ]


@dataclass(frozen=True)
class PersistenceDiagram:
    """Finite persistence pairs plus the birth of the single essential class.

    Pairs are held column-wise so that diagrams with millions of points stay
    cheap. Use :attr:`pairs` for a list of :class:`PersistencePair`.
    """

    births: NDArray[np.float64] = field(repr=False)
    deaths: NDArray[np.float64] = field(repr=False)
    birth_indices: NDArray[np.int64] = field(repr=False)
    death_indices: NDArray[np.int64] = field(repr=False)
    essential_birth: float = float("-inf")
    n_samples: int = 0

    def __post_init__(self) -> None:
        for name, dtype in (
            ("births", np.float64),
            ("deaths", np.float64),
            ("birth_indices", np.int64),
            ("death_indices", np.int64),
        ):
            arr = np.array(getattr(self, name), dtype=dtype).ravel()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not (len(self.births) == len(self.deaths) == len(self.birth_indices) == len(self.death_indices)):
            raise ValueError("pair columns must have equal length")
        if not (np.all(np.isfinite(self.births)) and np.all(np.isfinite(self.deaths))):
            raise ValueError("finite pairs only; the essential class is stored separately")
        if np.any(self.deaths < self.births):
            raise ValueError("death must not precede birth")

    def __len__(self) -> int:
        return self.births.shape[0]

    def __repr__(self) -> str:
        return (
            f"PersistenceDiagram(n_pairs={len(self)}, essential_birth={self.essential_birth}, "
            f"n_samples={self.n_samples})"
        )

    @classmethod
    def from_pairs(
        cls,
        pairs,
        essential_birth: float = float("-inf"),
        n_samples: int = 0,
    ) -> PersistenceDiagram:
        """Build a diagram from ``(birth, death)`` or full 4-tuples."""
        rows = [tuple(p) for p in pairs]
        births = [r[0] for r in rows]
        deaths = [r[1] for r in rows]
        bidx = [r[2] if len(r) > 2 else -1 for r in rows]
        didx = [r[3] if len(r) > 3 else -1 for r in rows]
        return cls(births, deaths, bidx, didx, float(essential_birth), n_samples)

    @property
    def lifetimes(self) -> NDArray[np.float64]:
        return self.deaths - self.births

    @property
    def points(self) -> NDArray[np.float64]:
        """``(k, 2)`` array of (birth, death)."""
        return np.column_stack([self.births, self.deaths])

    @property
    def pairs(self) -> list[PersistencePair]:
        return [
            PersistencePair(float(b), float(d), int(i), int(j))
            for b, d, i, j in zip(self.births, self.deaths, self.birth_indices, self.death_indices)
        ]

    def sorted(self) -> PersistenceDiagram:
        """Copy with pairs in lexicographic (birth, death) order."""
        order = np.lexsort((self.deaths, self.births))
        return self.select(order)

    def select(self, mask_or_index) -> PersistenceDiagram:
        """Sub-diagram from a boolean mask or integer index array."""
        return PersistenceDiagram(
            self.births[mask_or_index],
            self.deaths[mask_or_index],
            self.birth_indices[mask_or_index],
            self.death_indices[mask_or_index],
            self.essential_birth,
            self.n_samples,
        )


def _check_length(series: TimeSeries) -> None:
    if len(series) < 2:
        raise SeriesTooShort(f"persistence needs at least 2 samples, got {len(series)}")


def extract_extrema(series: TimeSeries | ArrayLike) -> ExtremaList:
    """Local extrema in index order with boundary sentinels.

    Runs of equal consecutive samples are collapsed onto the first index of
    the run before classification, so a flat peak or valley counts once.
    """
    series = as_series(series)
    _check_length(series)
    x = series.values
    n = x.shape[0]

    keep = np.empty(n, dtype=bool)
    keep[0] = True
    np.not_equal(x[1:], x[:-1], out=keep[1:])
    rep = np.flatnonzero(keep)
    r = x[rep]
    k = r.shape[0]

    if k == 1:
        return ExtremaList(
            np.array([0, 0], dtype=np.int64),
            np.array([-np.inf, np.inf]),
            np.array([False, True]),
        )

    is_max = np.empty(k, dtype=bool)
    is_ext = np.empty(k, dtype=bool)
    is_max[0] = r[0] > r[1]
    is_max[-1] = r[-1] > r[-2]
    is_ext[0] = is_ext[-1] = True
    if k > 2:
        up = r[1:-1] > r[:-2]
        down = r[1:-1] > r[2:]
        # with ties collapsed, an interior point is an extremum iff both
        # neighbours lie on the same side
        is_ext[1:-1] = up == down
        is_max[1:-1] = up & down

    sel = np.flatnonzero(is_ext)
    heights = r[sel].copy()
    kinds = is_max[sel]
    heights[0] = np.inf if kinds[0] else -np.inf
    heights[-1] = np.inf if kinds[-1] else -np.inf
    return ExtremaList(rep[sel].astype(np.int64), heights, kinds.copy())


_ARITY = 4


@numba.njit(cache=True, inline="always")
def _key_less(a0, a1, b0, b1):
    return a0 < b0 or (a0 == b0 and a1 < b1)


@numba.njit(cache=True, inline="always")
def _sift_down(heap, size, pos, k0, k1):
    while True:
        child = _ARITY * pos + 1
        if child >= size:
            break
        best = child
        for c in range(child + 1, min(child + _ARITY, size)):
            if _key_less(heap[c, 0], heap[c, 1], heap[best, 0], heap[best, 1]):
                best = c
        if not _key_less(heap[best, 0], heap[best, 1], k0, k1):
            break
        heap[pos, 0] = heap[best, 0]
        heap[pos, 1] = heap[best, 1]
        pos = best
    heap[pos, 0] = k0
    heap[pos, 1] = k1


@numba.njit(cache=True, inline="always")
def _sift_up(heap, pos, k0, k1):
    while pos > 0:
        parent = (pos - 1) // _ARITY
        if not _key_less(k0, k1, heap[parent, 0], heap[parent, 1]):
            break
        heap[pos, 0] = heap[parent, 0]
        heap[pos, 1] = heap[parent, 1]
        pos = parent
    heap[pos, 0] = k0
    heap[pos, 1] = k1


@numba.njit(cache=True, inline="always")
def _pair_key(heights, indices, i, j, scratch):
    """Heap key for the adjacent pair (i, j), or (-1, -1) if the gap is infinite.

    The key is (bit pattern of the gap, birth index << 32 | i). Bit patterns
    of non-negative doubles sort like the doubles themselves, so the whole
    key is two int64 words.
    """
    scratch[0] = abs(heights[i] - heights[j])
    if not np.isfinite(scratch[0]):
        return np.int64(-1), np.int64(-1)
    birth = indices[i] if heights[i] < heights[j] else indices[j]
    return scratch.view(np.int64)[0], (birth << 32) | i


@numba.njit(cache=True)
def _cancel_pairs(heights, indices):
    m = heights.shape[0]
    prev = np.arange(-1, m - 1)
    nxt = np.arange(1, m + 1)
    nxt[m - 1] = -1
    alive = np.ones(m, dtype=np.bool_)
    scratch = np.empty(1, dtype=np.float64)

    out_b = np.empty(m // 2, dtype=np.float64)
    out_d = np.empty(m // 2, dtype=np.float64)
    out_bi = np.empty(m // 2, dtype=np.int64)
    out_di = np.empty(m // 2, dtype=np.int64)
    n_pairs = 0

    # lazy deletion: an entry is live only while it still equals the current
    # key of its node; every splice pushes one fresh entry
    heap = np.empty((2 * m + 1, 2), dtype=np.int64)
    size_h = 0
    for i in range(m - 1):
        k0, k1 = _pair_key(heights, indices, i, i + 1, scratch)
        if k0 >= 0:
            heap[size_h, 0] = k0
            heap[size_h, 1] = k1
            size_h += 1
    for pos in range((size_h - 2) // _ARITY, -1, -1):
        _sift_down(heap, size_h, pos, heap[pos, 0], heap[pos, 1])

    size = m
    while size > 3 and size_h > 0:
        k0 = heap[0, 0]
        k1 = heap[0, 1]
        size_h -= 1
        if size_h > 0:
            _sift_down(heap, size_h, 0, heap[size_h, 0], heap[size_h, 1])

        i = k1 & 0xFFFFFFFF
        if not alive[i] or nxt[i] < 0:
            continue
        j = nxt[i]
        c0, c1 = _pair_key(heights, indices, i, j, scratch)
        if c0 != k0 or c1 != k1:
            continue

        lo, hi = (i, j) if heights[i] < heights[j] else (j, i)
        out_b[n_pairs] = heights[lo]
        out_d[n_pairs] = heights[hi]
        out_bi[n_pairs] = indices[lo]
        out_di[n_pairs] = indices[hi]
        n_pairs += 1

        p = prev[i]
        q = nxt[j]
        alive[i] = False
        alive[j] = False
        size -= 2
        if p >= 0:
            nxt[p] = q
        if q >= 0:
            prev[q] = p
        if p >= 0 and q >= 0:
            c0, c1 = _pair_key(heights, indices, p, q, scratch)
            if c0 >= 0:
                _sift_up(heap, size_h, c0, c1)
                size_h += 1

    essential = np.inf
    for i in range(m):
        if alive[i] and heights[i] < essential:
            essential = heights[i]
    return out_b[:n_pairs], out_d[:n_pairs], out_bi[:n_pairs], out_di[:n_pairs], essential


def sublevel_persistence(series: TimeSeries | ArrayLike) -> PersistenceDiagram:
    """Zero-dimensional sublevel-set persistence diagram of a sampled function.

    Pairs with an unbounded coordinate are dropped; the surviving component's
    birth is kept in ``essential_birth`` (``-inf`` when a boundary ray
    descends).

    Examples
    --------
    >>> dgm = sublevel_persistence([2.0, 0.0, 3.0, 1.0, 4.0])
    >>> dgm.pairs
    [PersistencePair(birth=1.0, death=3.0, birth_index=3, death_index=2)]
    >>> dgm.essential_birth
    0.0
    """
    series = as_series(series)
    ext = extract_extrema(series)
    b, d, bi, di, essential = _cancel_pairs(ext.heights, ext.indices)
    return PersistenceDiagram(b, d, bi, di, float(essential), len(series))


def sublevel_persistence_bruteforce(series: TimeSeries | ArrayLike) -> PersistenceDiagram:
    """Reference diagram from an explicit threshold sweep with union-find.

    Vertices are switched on in order of height and merged with switched-on
    neighbours; at every merge the younger component dies (Elder Rule). The
    boundary rays are modelled by two virtual end vertices at ``-inf`` (ray
    descends) or ``+inf`` (ray ascends). Intended as a test oracle only.
    """
    series = as_series(series)
    _check_length(series)
    n = len(series)
    if n > BRUTEFORCE_MAX_SAMPLES:
        raise OracleSizeExceeded(f"oracle limited to {BRUTEFORCE_MAX_SAMPLES} samples, got {n}")
    x = [float(v) for v in series.values]

    def ray_end(seq):
        # a flat edge takes the direction of the first edge that is not flat
        for v in seq[1:]:
            if v != seq[0]:
                return float("-inf") if v > seq[0] else float("inf")
        return None

    left = ray_end(x)
    right = ray_end(x[::-1])
    if left is None:
        left, right = float("-inf"), float("inf")
    h = [left] + x + [right]
    pos = [-1] + list(range(n)) + [n - 1]

    parent = list(range(n + 2))
    birth_vertex = list(range(n + 2))
    on = [False] * (n + 2)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    pairs = []
    for v in sorted(range(n + 2), key=lambda k: (h[k], k)):
        on[v] = True
        for w in (v - 1, v + 1):
            if not (0 <= w < n + 2 and on[w]):
                continue
            rv, rw = find(v), find(w)
            if rv == rw:
                continue
            bv, bw = birth_vertex[rv], birth_vertex[rw]
            young, old = (rv, rw) if (h[bv], bv) > (h[bw], bw) else (rw, rv)
            yb = birth_vertex[young]
            if h[yb] != h[v] and np.isfinite(h[yb]) and np.isfinite(h[v]):
                pairs.append((h[yb], h[v], pos[yb], pos[v]))
            parent[young] = old

    root = find(0)
    essential = h[birth_vertex[root]]
    return PersistenceDiagram.from_pairs(pairs, essential, n)


def lifetimes(dgm: PersistenceDiagram) -> NDArray[np.float64]:
    """Death minus birth for every finite pair."""
    return dgm.lifetimes
