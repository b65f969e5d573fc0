"""Landmarks, Vietoris-Rips 2-skeleta and cochains on them.

Edges are stored once, on the orientation ``i < j``; evaluating a cocycle on
``(j, i)`` returns the negated stored value. Edges and triangles are kept
sorted by filtration value with lexicographic tie-break, so the subcomplex
at any scale is a prefix of both lists.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import cdist

from .errors import ValidationError

RINGS = ("Z", "Zp", "R")

Metric = Callable[[np.ndarray, np.ndarray], np.ndarray]


def euclidean(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return cdist(X, Y)


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    labels: Optional[Sequence] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise ValidationError("points must be a 2-d array of shape (n, d)")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("point coordinates must be finite")
        if self.labels is not None and len(self.labels) != len(pts):
            raise ValidationError("one label per point required")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def subset(self, indices) -> "PointCloud":
        idx = np.asarray(indices, dtype=int)
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        return PointCloud(self.points[idx], labels)


def as_cloud(data) -> PointCloud:
    return data if isinstance(data, PointCloud) else PointCloud(data)


def maxmin_sample(cloud, n_landmarks: int, seed: Optional[int] = None,
                  metric: Metric = euclidean):
    """Greedy farthest-point (maxmin) landmark selection.

    Parameters
    ----------
    cloud : PointCloud or array_like
    n_landmarks : int
        Number of landmarks, ``1 <= n_landmarks <= len(cloud)``.
    seed : int, optional
        ``None`` or a negative value starts from point 0. A nonnegative seed
        picks a pseudo-random (but reproducible) first landmark.

    Returns
    -------
    landmarks : ndarray of int
        Indices in selection order.
    cover_radius : float
        Largest distance from a point to its nearest landmark.
    """
    X = as_cloud(cloud).points
    n = X.shape[0]
    if not 1 <= n_landmarks <= n:
        raise ValidationError(f"n_landmarks must lie in [1, {n}], got {n_landmarks}")
    start = 0
    if seed is not None and seed >= 0:
        start = int(np.random.default_rng(seed).integers(n))
    landmarks = np.empty(n_landmarks, dtype=int)
    landmarks[0] = start
    nearest = metric(X[start:start + 1], X)[0]
    for s in range(1, n_landmarks):
        # np.argmax returns the first maximiser: lowest-index tie-break
        nxt = int(np.argmax(nearest))
        landmarks[s] = nxt
        np.minimum(nearest, metric(X[nxt:nxt + 1], X)[0], out=nearest)
    return landmarks, float(nearest.max())


@dataclass(eq=False)
class FiltrationComplex:
    """Filtered 2-skeleton with edges ``(i, j)``, ``i < j``, and triangles ``i < j < k``."""

    vertex_count: int
    edges: np.ndarray
    edge_values: np.ndarray
    triangles: np.ndarray
    triangle_values: np.ndarray
    max_scale: float
    _parent: Optional["FiltrationComplex"] = field(default=None, repr=False)

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        self.edge_values = np.asarray(self.edge_values, dtype=float).reshape(-1)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        self.triangle_values = np.asarray(self.triangle_values, dtype=float).reshape(-1)

    @classmethod
    def from_simplices(cls, vertex_count: int, edges, triangles=(), max_scale=None):
        """Build a complex from ``[i, j, t]`` and ``[i, j, k, t]`` rows in any order."""
        e = np.asarray(edges, dtype=float).reshape(-1, 3)
        t = np.asarray(triangles, dtype=float).reshape(-1, 4)
        ei = np.sort(e[:, :2].astype(np.int64), axis=1)
        ti = np.sort(t[:, :3].astype(np.int64), axis=1)
        eo = np.lexsort((ei[:, 1], ei[:, 0], e[:, 2]))
        to = np.lexsort((ti[:, 2], ti[:, 1], ti[:, 0], t[:, 3]))
        if max_scale is None:
            vals = np.concatenate([e[:, 2], t[:, 3], [0.0]])
            max_scale = float(vals.max())
        K = cls(vertex_count, ei[eo], e[eo, 2], ti[to], t[to, 3], float(max_scale))
        K.validate()
        return K

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @cached_property
    def _edge_keys(self):
        keys = self.edges[:, 0] * self.vertex_count + self.edges[:, 1]
        order = np.argsort(keys, kind="stable")
        return keys[order], order

    def edge_indices(self, i, j) -> np.ndarray:
        """Vectorised lookup of undirected edges; ``-1`` where absent."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        a, b = np.minimum(i, j), np.maximum(i, j)
        q = a * self.vertex_count + b
        sorted_keys, order = self._edge_keys
        if sorted_keys.size == 0:
            return np.full(q.shape, -1, dtype=np.int64)
        pos = np.clip(np.searchsorted(sorted_keys, q), 0, sorted_keys.size - 1)
        found = (sorted_keys[pos] == q) & (a != b)
        return np.where(found, order[pos], -1)

    def edge_index(self, i: int, j: int) -> int:
        idx = int(self.edge_indices(i, j))
        if idx < 0:
            raise KeyError((i, j))
        return idx

    @cached_property
    def triangle_edges(self) -> np.ndarray:
        """Edge indices ``(ij, jk, ik)`` of every triangle, shape ``(T, 3)``."""
        t = self.triangles
        if t.shape[0] == 0:
            return np.zeros((0, 3), dtype=np.int64)
        out = np.stack([self.edge_indices(t[:, 0], t[:, 1]),
                        self.edge_indices(t[:, 1], t[:, 2]),
                        self.edge_indices(t[:, 0], t[:, 2])], axis=1)
        return out

    def validate(self):
        if np.any(self.edges[:, 0] >= self.edges[:, 1]):
            raise ValidationError("edges must satisfy i < j")
        if np.any(self.edge_values < 0):
            raise ValidationError("edge filtration values must be nonnegative")
        if self.edges.size and self.edges.max() >= self.vertex_count:
            raise ValidationError("edge vertex out of range")
        te = self.triangle_edges
        if np.any(te < 0):
            raise ValidationError("triangle with a missing edge")
        if te.size and np.any(self.edge_values[te] > self.triangle_values[:, None]):
            raise ValidationError("triangle enters before one of its edges")

    def restrict(self, scale: float) -> "FiltrationComplex":
        """Subcomplex of simplices with filtration value ``<= scale`` (a prefix)."""
        ne = int(np.searchsorted(self.edge_values, scale, side="right"))
        nt = int(np.searchsorted(self.triangle_values, scale, side="right"))
        return FiltrationComplex(self.vertex_count, self.edges[:ne], self.edge_values[:ne],
                                 self.triangles[:nt], self.triangle_values[:nt],
                                 float(min(scale, self.max_scale)), _parent=self)

    def is_prefix_of(self, other: "FiltrationComplex") -> bool:
        if self.vertex_count != other.vertex_count or self.n_edges > other.n_edges:
            return False
        return bool(np.array_equal(self.edges, other.edges[:self.n_edges]))

    def same_edges(self, other: "FiltrationComplex") -> bool:
        return self is other or (self.n_edges == other.n_edges and self.is_prefix_of(other))

    @cached_property
    def coboundary_matrix(self) -> sp.csr_matrix:
        """Sparse ``(n_edges, n_vertices)`` matrix of the real coboundary."""
        m = self.n_edges
        rows = np.repeat(np.arange(m), 2)
        cols = self.edges.reshape(-1)
        data = np.tile([-1.0, 1.0], m)
        return sp.csr_matrix((data, (rows, cols)), shape=(m, self.vertex_count))

    def components(self):
        """Connected components of the 1-skeleton: ``(count, labels)``."""
        m = self.n_edges
        A = sp.csr_matrix((np.ones(m), (self.edges[:, 0], self.edges[:, 1])),
                          shape=(self.vertex_count,) * 2)
        return connected_components(A, directed=False)

    def adjacency(self) -> sp.csr_matrix:
        m = self.n_edges
        A = sp.coo_matrix((np.arange(1, m + 1, dtype=float), (self.edges[:, 0], self.edges[:, 1])),
                          shape=(self.vertex_count,) * 2)
        return (A + A.T).tocsr()


def vietoris_rips(landmarks, max_scale: float, metric: Metric = euclidean) -> FiltrationComplex:
    """Vietoris-Rips 2-skeleton with all edges of length ``<= max_scale``."""
    if max_scale < 0:
        raise ValidationError("max_scale must be nonnegative")
    X = as_cloud(landmarks).points
    n = X.shape[0]
    D = metric(X, X)
    D = np.maximum(D, D.T)
    adj = D <= max_scale
    np.fill_diagonal(adj, False)
    ei, ej = np.nonzero(np.triu(adj, 1))
    ev = D[ei, ej]
    tris = []
    upper = np.triu(adj, 1)
    for i in range(n):
        nb = np.flatnonzero(upper[i])
        if nb.size < 2:
            continue
        sub = np.triu(adj[np.ix_(nb, nb)], 1)
        a, b = np.nonzero(sub)
        if a.size:
            tris.append(np.stack([np.full(a.size, i), nb[a], nb[b]], axis=1))
    if tris:
        T = np.concatenate(tris)
        tv = np.maximum(np.maximum(D[T[:, 0], T[:, 1]], D[T[:, 1], T[:, 2]]), D[T[:, 0], T[:, 2]])
    else:
        T = np.zeros((0, 3), dtype=np.int64)
        tv = np.zeros(0)
    eo = np.lexsort((ej, ei, ev))
    to = np.lexsort((T[:, 2], T[:, 1], T[:, 0], tv))
    edges = np.stack([ei, ej], axis=1)[eo]
    return FiltrationComplex(n, edges, ev[eo], T[to], tv[to], float(max_scale))


@dataclass
class Cochain0:
    values: np.ndarray
    ring: str = "R"
    prime: Optional[int] = None

    def __post_init__(self):
        _check_ring(self.ring, self.prime)
        self.values = _coerce(self.values, self.ring, self.prime)


@dataclass(eq=False)
class Cocycle1:
    """Edge function on ``complex`` stored on orientations ``i < j``."""

    complex: FiltrationComplex
    values: np.ndarray
    ring: str = "R"
    prime: Optional[int] = None

    def __post_init__(self):
        _check_ring(self.ring, self.prime)
        self.values = _coerce(self.values, self.ring, self.prime)
        if self.values.shape != (self.complex.n_edges,):
            raise ValidationError(
                f"expected {self.complex.n_edges} edge values, got {self.values.shape}")

    def __call__(self, i: int, j: int):
        idx = self.complex.edge_index(i, j)
        v = self.values[idx]
        if i < j:
            return v
        return (-v) % self.prime if self.ring == "Zp" else -v

    def restrict(self, K: FiltrationComplex) -> "Cocycle1":
        """Restriction to a subcomplex ``K`` (by edge lookup)."""
        if K.is_prefix_of(self.complex):
            vals = self.values[:K.n_edges]
        else:
            idx = self.complex.edge_indices(K.edges[:, 0], K.edges[:, 1])
            if np.any(idx < 0):
                raise ValidationError("target complex is not a subcomplex")
            vals = self.values[idx]
        return Cocycle1(K, vals.copy(), self.ring, self.prime)

    def as_real(self) -> "Cocycle1":
        if self.ring == "Zp":
            raise ValidationError("lift a mod-p cocycle before treating it as real")
        return Cocycle1(self.complex, self.values.astype(float), "R")

    def nonzero_entries(self):
        """List of ``[i, j, v]`` for nonzero values."""
        nz = np.flatnonzero(self.values)
        return [[int(self.complex.edges[e, 0]), int(self.complex.edges[e, 1]),
                 self.values[e].item()] for e in nz]

    def __add__(self, other: "Cocycle1") -> "Cocycle1":
        _require_same(self, other)
        return Cocycle1(self.complex, self.values + other.values, self.ring, self.prime)

    def __sub__(self, other: "Cocycle1") -> "Cocycle1":
        _require_same(self, other)
        return Cocycle1(self.complex, self.values - other.values, self.ring, self.prime)

    def __mul__(self, c) -> "Cocycle1":
        return Cocycle1(self.complex, self.values * c, self.ring, self.prime)

    __rmul__ = __mul__


def _require_same(a: Cocycle1, b: Cocycle1):
    if a.ring != b.ring or a.prime != b.prime:
        raise ValidationError("cocycles over different rings")
    if not a.complex.same_edges(b.complex):
        raise ValidationError("cocycles live on different complexes")


def _check_ring(ring, prime):
    if ring not in RINGS:
        raise ValidationError(f"ring must be one of {RINGS}, got {ring!r}")
    if ring == "Zp" and (prime is None or prime < 2):
        raise ValidationError("ring 'Zp' needs a prime")


def _coerce(values, ring, prime):
    v = np.asarray(values)
    if ring == "R":
        return v.astype(float).reshape(-1)
    if v.dtype.kind == "f":
        if not np.all(v == np.round(v)):
            raise ValidationError("integer ring needs integral values")
    v = v.astype(np.int64).reshape(-1)
    return v % prime if ring == "Zp" else v


def coboundary(K: FiltrationComplex, tau, ring: Optional[str] = None,
               prime: Optional[int] = None) -> Cocycle1:
    """``(delta tau)^{ij} = tau(j) - tau(i)`` on every edge of ``K``."""
    if not isinstance(tau, Cochain0):
        tau = Cochain0(tau, ring or "R", prime)
    if ring is not None and ring != tau.ring:
        raise ValidationError(f"cochain over {tau.ring}, requested {ring}")
    if tau.values.shape != (K.vertex_count,):
        raise ValidationError("cochain length must equal vertex_count")
    v = tau.values
    d = v[K.edges[:, 1]] - v[K.edges[:, 0]]
    return Cocycle1(K, d, tau.ring, tau.prime)


def cocycle_defect(K: FiltrationComplex, theta: Cocycle1) -> np.ndarray:
    """``theta^{ij} + theta^{jk} - theta^{ik}`` on every triangle of ``K``."""
    if K.is_prefix_of(theta.complex):
        vals = theta.values
    else:
        vals = theta.restrict(K).values
    te = K.triangle_edges
    d = vals[te[:, 0]] + vals[te[:, 1]] - vals[te[:, 2]]
    if theta.ring == "Zp":
        d = d % theta.prime
    return d


def check_cocycle(K: FiltrationComplex, theta: Cocycle1) -> bool:
    d = cocycle_defect(K, theta)
    if d.size == 0:
        return True
    if theta.ring == "R":
        scale = max(1.0, float(np.abs(theta.values).max(initial=0.0)))
        return bool(np.all(np.abs(d) <= 1e-9 * scale))
    return bool(np.all(d == 0))
