"""Inner products on real 1-cochains of a complex.

Every form is carried as a sparse symmetric matrix ``Q`` over the edges of a
reference complex, so that ``<theta, eta> = theta.values @ Q @ eta.values``.
The edge-wise dot product uses ``Q = I``. The estimated Dirichlet form is
assembled from a k-nearest-neighbour graph on the data and a partition of
unity over the landmarks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree

from .complex import Cocycle1, FiltrationComplex, as_cloud
from .errors import ValidationError

DEFAULT_KNN = 15
# added multiple of the edge-wise dot product, keeps least squares well posed
DIRICHLET_REGULARIZATION = 1e-9


@dataclass(frozen=True)
class NeighborGraph:
    """Undirected k-NN graph stored as CSR neighbour lists with Gaussian weights."""

    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    k: int
    bandwidth: float

    @property
    def n_points(self) -> int:
        return self.indptr.size - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def directed_edges(self):
        """Arrays ``(a, b, h(a, b))`` over all ordered neighbour pairs."""
        a = np.repeat(np.arange(self.n_points), self.degrees)
        return a, self.indices, self.weights

    def weight_matrix(self) -> sp.csr_matrix:
        n = self.n_points
        return sp.csr_matrix((self.weights, self.indices, self.indptr), shape=(n, n))


def neighbor_graph(cloud, k: int = DEFAULT_KNN, bandwidth: Optional[float] = None) -> NeighborGraph:
    """Symmetrised k-NN graph with weights ``exp(-|a - b|^2 / bandwidth^2)``.

    ``bandwidth=None`` uses the median distance over all k-NN pairs.
    """
    X = as_cloud(cloud).points
    n = X.shape[0]
    if k < 1:
        raise ValidationError("k must be at least 1")
    if n < k + 1:
        raise ValidationError(f"need at least k+1 = {k + 1} points, got {n}")
    dist, idx = cKDTree(X).query(X, k=k + 1)
    rows = np.repeat(np.arange(n), k)
    cols = idx[:, 1:].reshape(-1)
    d = dist[:, 1:].reshape(-1)
    # queries return the point itself first unless duplicates tie with it
    self_hit = cols == rows
    if np.any(self_hit):
        dist, idx = cKDTree(X).query(X, k=k + 2)
        nb = [[j for j in r if j != i][:k] for i, r in enumerate(idx.tolist())]
        cols = np.array(nb).reshape(-1)
        d = np.linalg.norm(X[rows] - X[cols], axis=1)
    if bandwidth is None:
        bandwidth = float(np.median(d))
        if bandwidth <= 0:
            bandwidth = 1.0
    if bandwidth <= 0:
        raise ValidationError("bandwidth must be positive")
    A = sp.coo_matrix((np.ones_like(d), (rows, cols)), shape=(n, n)).tocsr()
    A = ((A + A.T) > 0).tocsr()
    A.sort_indices()
    a = np.repeat(np.arange(n), np.diff(A.indptr))
    b = A.indices
    sq = np.sum((X[a] - X[b]) ** 2, axis=1)
    w = np.exp(-sq / bandwidth ** 2)
    return NeighborGraph(A.indptr.copy(), b.copy(), w, k, float(bandwidth))


@dataclass(eq=False)
class InnerProductForm:
    """Symmetric positive semidefinite bilinear form on edge functions of ``complex``."""

    kind: str
    complex: FiltrationComplex
    matrix: Optional[sp.csr_matrix] = None
    # (w, y, z) -> value for the estimated Dirichlet form
    coefficients: Dict[tuple, float] = field(default_factory=dict, repr=False)
    dropped_terms: int = 0

    def _check(self, theta: Cocycle1):
        if not theta.complex.same_edges(self.complex):
            raise ValidationError("cocycle and form live on different complexes")

    def __call__(self, theta: Cocycle1, eta: Cocycle1) -> float:
        self._check(theta)
        self._check(eta)
        if self.kind == "dsmv":
            return float(np.dot(theta.values, eta.values))
        return float(theta.values @ (self.matrix @ eta.values))

    def operator(self, regularize: bool = True) -> sp.csr_matrix:
        """Matrix used by least squares (with the small dot-product regulariser)."""
        m = self.complex.n_edges
        if self.kind == "dsmv":
            return sp.identity(m, format="csr")
        if regularize:
            return (self.matrix + DIRICHLET_REGULARIZATION * sp.identity(m)).tocsr()
        return self.matrix

    def triples(self):
        """``[[w, y, z, value], ...]`` of the coefficient table (estimated form only)."""
        return [[int(w), int(y), int(z), float(v)] for (w, y, z), v in sorted(self.coefficients.items())]


def dsmv_form(K: FiltrationComplex) -> InnerProductForm:
    return InnerProductForm("dsmv", K)


def dsmv(theta: Cocycle1, eta: Cocycle1) -> float:
    """Edge-wise dot product, summing over unordered edges."""
    if not theta.complex.same_edges(eta.complex):
        raise ValidationError("cocycles live on different complexes")
    return float(np.dot(np.asarray(theta.values, float), np.asarray(eta.values, float)))


def dirichlet_coefficients(cover, graph: NeighborGraph) -> Dict[int, sp.csr_matrix]:
    """Per-landmark matrices ``D_w[y, z]`` of the Dirichlet coefficient estimate.

    ``D_w[y, z] = sum_a phi_w(a) / |N(a)| sum_{b in N(a)} h(a, b)
    (phi_y(b) - phi_y(a)) (phi_z(b) - phi_z(a))``.
    """
    phi = cover.phi.tocsr()
    if phi.shape[0] != graph.n_points:
        raise ValidationError(
            f"cover has {phi.shape[0]} points but the graph has {graph.n_points}")
    a, b, h = graph.directed_edges()
    c = h / graph.degrees[a]
    diff = (phi[b] - phi[a]).tocsr()  # one row per directed graph edge
    phi_a = phi[a].tocsc()
    out = {}
    for w in range(phi.shape[1]):
        col = phi_a.getcol(w)
        rows = col.indices
        if rows.size == 0:
            continue
        Dw = diff[rows]
        weights = c[rows] * col.data
        Mw = (Dw.T @ sp.diags(weights) @ Dw).tocsr()
        Mw.eliminate_zeros()
        if Mw.nnz:
            out[w] = Mw
    return out


def estimated_dirichlet_form(cover, graph: NeighborGraph, K: FiltrationComplex) -> InnerProductForm:
    """Estimated Dirichlet inner product ``1/2 sum_{w,y,z} D_wyz theta^{wy} eta^{wz}``.

    Terms whose edge ``{w, y}`` or ``{w, z}`` is not in ``K`` are dropped (the
    result stays positive semidefinite); their count is kept in
    ``dropped_terms``.
    """
    table = dirichlet_coefficients(cover, graph)
    m = K.n_edges
    Q = sp.csr_matrix((m, m))
    coeffs = {}
    dropped = 0
    blocks = []
    for w, Mw in table.items():
        coo = Mw.tocoo()
        for y, z, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
            coeffs[(w, y, z)] = v
        ys = np.unique(np.concatenate([coo.row, coo.col]))
        ys = ys[ys != w]
        e = K.edge_indices(np.full(ys.size, w), ys)
        present = e >= 0
        # terms with y == w or z == w vanish since theta^{ww} = 0
        missing = set(ys[~present].tolist())
        if missing:
            dropped += int(sum(1 for y, z in zip(coo.row, coo.col)
                               if y in missing or z in missing))
        ys, e = ys[present], e[present]
        if ys.size == 0:
            continue
        sign = np.where(ys > w, 1.0, -1.0)
        # S maps edge values to (theta^{wy})_y
        S = sp.csr_matrix((sign, (ys, e)), shape=(Mw.shape[0], m))
        blocks.append(S.T @ Mw @ S)
    if blocks:
        Q = sum(blocks[1:], blocks[0])
    # the 1/2 of the form, with exact symmetrisation
    Q = (0.25 * (Q + Q.T)).tocsr()
    return InnerProductForm("estimated_dirichlet", K, Q, coeffs, dropped)
