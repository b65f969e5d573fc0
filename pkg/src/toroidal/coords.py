"""Circle- and torus-valued coordinates from integral cocycles.

``integrate`` walks a spanning tree of the 1-skeleton and reduces path sums
mod 1. ``sparse_integrate`` extends landmark potentials to every data point
with a partition of unity subordinate to the landmark cover.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, minimum_spanning_tree
from scipy.spatial import cKDTree

from .complex import Cocycle1, FiltrationComplex, as_cloud
from .errors import CoverError, IntegralityError, NerveEdgeError, ValidationError
from .harmonic import harmonic_representative
from .lattice import low_energy_representatives
from .metrics import InnerProductForm

INTEGRALITY_TOL = 1e-6


@dataclass
class CoverData:
    """Landmark balls of radius ``epsilon / 2`` and a row-stochastic partition of unity."""

    landmarks: np.ndarray
    epsilon: float
    phi: sp.csr_matrix

    @property
    def n_points(self) -> int:
        return self.phi.shape[0]

    def base_landmarks(self) -> np.ndarray:
        """Landmark of largest weight for every point, lowest index on ties."""
        phi = self.phi
        base = np.empty(phi.shape[0], dtype=np.int64)
        for b in range(phi.shape[0]):
            lo, hi = phi.indptr[b], phi.indptr[b + 1]
            cols, vals = phi.indices[lo:hi], phi.data[lo:hi]
            best = vals.max()
            base[b] = cols[vals == best].min()
        return base


@dataclass
class CircleMap:
    values: np.ndarray
    basepoints: List[int] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.mod(np.asarray(self.values, dtype=float), 1.0)
        # x mod 1 can round up to exactly 1.0 for tiny negative x
        self.values[self.values >= 1.0] = 0.0

    def __len__(self):
        return self.values.size


@dataclass
class TorusMap:
    maps: List[CircleMap]
    M: List[List[int]]
    provenance: tuple = ("toroidal", "dense")
    cocycles: List[Cocycle1] = field(default_factory=list, repr=False)
    harmonic: List[Cocycle1] = field(default_factory=list, repr=False)

    @property
    def k(self) -> int:
        return len(self.maps)

    def as_array(self) -> np.ndarray:
        return np.column_stack([m.values for m in self.maps])


def _spanning_tree(K: FiltrationComplex, seed: Optional[int]):
    """BFS order and predecessors for a spanning forest of the 1-skeleton.

    ``seed=None`` gives the breadth-first tree in index order; an integer
    seed gives the breadth-first tree of a random-weight minimum spanning
    tree. Roots are always the lowest-index vertex of each component.
    """
    n = K.vertex_count
    A = K.adjacency()
    if seed is not None:
        rng = np.random.default_rng(seed)
        m = K.n_edges
        W = sp.coo_matrix((rng.random(m) + 1.0, (K.edges[:, 0], K.edges[:, 1])), shape=(n, n))
        T = minimum_spanning_tree(W.tocsr())
        A = (T + T.T).tocsr()
    _, labels = K.components()
    roots = np.unique(labels, return_index=True)[1]
    order, pred = [], np.full(n, -9999, dtype=np.int64)
    for r in roots:
        o, p = breadth_first_order(A, int(r), directed=False, return_predecessors=True)
        order.append(o)
        pred[o] = p[o]
    return np.concatenate(order), pred, roots.tolist()


def potentials(theta: Cocycle1, K: Optional[FiltrationComplex] = None, seed: Optional[int] = None,
               check: bool = True):
    """Real path sums of ``theta`` from each component's root along a spanning tree.

    With ``check``, every non-tree edge must close a cycle whose sum is an
    integer to within ``1e-6``, otherwise :class:`IntegralityError`.
    """
    K = theta.complex if K is None else K
    if theta.ring == "Zp":
        raise ValidationError("integrate needs an integer or real cocycle")
    vals = np.asarray(theta.values, dtype=float)
    order, pred, roots = _spanning_tree(K, seed)
    pot = np.zeros(K.vertex_count)
    for v in order:
        u = pred[v]
        if u < 0:
            continue
        e = K.edge_index(u, v)
        pot[v] = pot[u] + (vals[e] if u < v else -vals[e])
    if check and K.n_edges:
        i, j = K.edges[:, 0], K.edges[:, 1]
        cycle = pot[i] + vals - pot[j]
        bad = np.abs(cycle - np.rint(cycle)) > INTEGRALITY_TOL
        if np.any(bad):
            e = int(np.flatnonzero(bad)[0])
            raise IntegralityError(
                "cocycle does not represent an integral class "
                f"(cycle through edge {tuple(K.edges[e])} sums to {cycle[e]:.6g})")
    return pot, roots


def integrate(theta: Cocycle1, K: Optional[FiltrationComplex] = None,
              seed: Optional[int] = None) -> CircleMap:
    """Circle-valued map on the vertices whose coboundary is ``theta`` mod 1."""
    pot, roots = potentials(theta, K, seed)
    return CircleMap(pot, roots)


def partition_of_unity(data, landmarks, epsilon: float) -> CoverData:
    """Tent partition of unity ``max(0, epsilon/2 - |b - x|)``, normalised per point.

    ``landmarks`` is either a point cloud or ``(cloud, indices)``.
    """
    X = as_cloud(data).points
    if isinstance(landmarks, tuple):
        lm_cloud, lm_idx = landmarks
        Lp = as_cloud(lm_cloud).points
        lm_idx = np.asarray(lm_idx, dtype=int)
    else:
        Lp = as_cloud(landmarks).points
        lm_idx = np.arange(Lp.shape[0])
    r = epsilon / 2.0
    tree = cKDTree(Lp)
    D = tree.sparse_distance_matrix(cKDTree(X), r, output_type="coo_matrix")
    # landmark x data -> data x landmark; explicit zeros for coincident points
    rows, cols, dist = D.col, D.row, D.data
    coincident = tree.query_ball_point(X, 0.0)
    extra_r = [b for b, hits in enumerate(coincident) for _ in hits]
    extra_c = [x for hits in coincident for x in hits]
    rows = np.concatenate([rows, np.array(extra_r, dtype=np.int64)])
    cols = np.concatenate([cols, np.array(extra_c, dtype=np.int64)])
    dist = np.concatenate([dist, np.zeros(len(extra_r))])
    weight = r - dist
    keep = weight > 0
    W = sp.coo_matrix((weight[keep], (rows[keep], cols[keep])), shape=(X.shape[0], Lp.shape[0]))
    W.sum_duplicates()
    W = W.tocsr()
    # duplicates from the coincident pass carry the full radius twice
    W.data = np.where(W.data > r, r, W.data)
    totals = np.asarray(W.sum(axis=1)).ravel()
    uncovered = np.flatnonzero(totals <= 0)
    if uncovered.size:
        raise CoverError(
            f"point {int(uncovered[0])} is not covered by any landmark ball; "
            "increase epsilon or landmarks", index=int(uncovered[0]))
    phi = sp.diags(1.0 / totals) @ W
    phi = phi.tocsr()
    phi.sort_indices()
    return CoverData(lm_idx, float(epsilon), phi)


def sparse_integrate(theta: Cocycle1, cover: CoverData, K: Optional[FiltrationComplex] = None,
                     seed: Optional[int] = None) -> CircleMap:
    """``(tau_y + sum_z phi_z(b) theta^{yz}) mod 1`` with ``y`` the heaviest landmark of ``b``."""
    K = theta.complex if K is None else K
    if cover.phi.shape[1] != K.vertex_count:
        raise ValidationError("cover landmarks must be the vertices of K")
    tau, roots = potentials(theta, K, seed)
    vals = np.asarray(theta.values, dtype=float)
    phi = cover.phi
    y = cover.base_landmarks()
    b = np.repeat(np.arange(phi.shape[0]), np.diff(phi.indptr))
    z = phi.indices
    w = phi.data
    off = z != y[b]
    e = K.edge_indices(y[b[off]], z[off])
    if np.any(e < 0):
        k = int(np.flatnonzero(e < 0)[0])
        raise NerveEdgeError(
            f"nerve edge absent; increase scale (edge {int(y[b[off]][k])}-{int(z[off][k])})")
    sign = np.where(y[b[off]] < z[off], 1.0, -1.0)
    contrib = np.zeros(b.size)
    contrib[off] = w[off] * sign * vals[e]
    out = tau[y] + np.bincount(b, weights=contrib, minlength=phi.shape[0])
    return CircleMap(out, roots)


def _integrator(cover, K, seed):
    if cover is None:
        return lambda th: integrate(th, K, seed)
    return lambda th: sparse_integrate(th, cover, K, seed)


def circular_coordinates(alpha: Cocycle1, form: Optional[InnerProductForm] = None,
                         K: Optional[FiltrationComplex] = None, cover: Optional[CoverData] = None,
                         seed: Optional[int] = None) -> CircleMap:
    """Harmonic smoothing followed by (sparse) integration of one class."""
    K = alpha.complex if K is None else K
    theta = harmonic_representative(alpha, form, K).theta
    return _integrator(cover, K, seed)(theta)


def toroidal_coordinates(alphas: Sequence[Cocycle1], form: Optional[InnerProductForm] = None,
                         K: Optional[FiltrationComplex] = None, cover: Optional[CoverData] = None,
                         seed: Optional[int] = None) -> TorusMap:
    """Low-energy integer recombination of the classes, then (sparse) integration."""
    if not alphas:
        raise ValidationError("need at least one class")
    K = alphas[0].complex if K is None else K
    if form is None:
        from .metrics import dsmv_form
        form = dsmv_form(K)
    etas = [harmonic_representative(a, form, K).theta for a in alphas]
    thetas, M = low_energy_representatives(etas, form)
    run = _integrator(cover, K, seed)
    maps = [run(th) for th in thetas]
    mode = "dense" if cover is None else "sparse"
    return TorusMap(maps, M, ("toroidal", mode), thetas, etas)


def independent_circular_coordinates(alphas: Sequence[Cocycle1], form=None, K=None, cover=None,
                                     seed=None) -> TorusMap:
    """Per-class circular coordinates bundled as a torus map with ``M = I``."""
    K = alphas[0].complex if K is None else K
    etas = [harmonic_representative(a, form, K).theta for a in alphas]
    run = _integrator(cover, K, seed)
    k = len(alphas)
    M = [[int(i == j) for j in range(k)] for i in range(k)]
    mode = "dense" if cover is None else "sparse"
    return TorusMap([run(e) for e in etas], M, ("circular", mode), etas, etas)
