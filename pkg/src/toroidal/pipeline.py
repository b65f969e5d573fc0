"""End-to-end driver: landmarks, persistence, class selection, coordinates, correlation.

The two halves mirror the two-step command line workflow: :func:`persist`
computes the barcode, the user picks classes and a scale, and
:func:`coordinates` turns them into circle- or torus-valued maps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from .cohomology import (DEFAULT_PRIME, Barcode, is_prime, lift_to_integer, persistent_cohomology,
                         select_classes)
from .complex import FiltrationComplex, PointCloud, as_cloud, maxmin_sample, vietoris_rips
from .coords import (CoverData, TorusMap, independent_circular_coordinates, partition_of_unity,
                     toroidal_coordinates)
from .correlation import CorrelationMatrix, correlation_matrix
from .errors import ValidationError
from .metrics import DEFAULT_KNN, dsmv_form, estimated_dirichlet_form, neighbor_graph

AUTO_EPSILON_FACTOR = 2.05
# default Rips cap in units of the cover radius: twice the automatic scale
AUTO_MAX_SCALE_FACTOR = 2 * AUTO_EPSILON_FACTOR


@dataclass
class PersistResult:
    cloud: PointCloud
    landmarks: np.ndarray
    cover_radius: float
    complex: FiltrationComplex
    barcode: Barcode
    seed: Optional[int] = None

    @property
    def max_scale(self) -> float:
        return self.complex.max_scale

    def auto_epsilon(self) -> float:
        return AUTO_EPSILON_FACTOR * self.cover_radius


@dataclass
class CoordinatesResult:
    torus_map: TorusMap
    epsilon: float
    classes: List[int]
    cover: Optional[CoverData]
    circular_map: Optional[TorusMap] = None
    D_scc: Optional[CorrelationMatrix] = None
    D_stc: Optional[CorrelationMatrix] = None
    form_kind: str = "dsmv"


def truncated_persistence(b: Barcode, dim: int = 1, cap: Optional[float] = None) -> np.ndarray:
    """Persistences in barcode order, with infinite deaths cut at ``cap``."""
    cap = b.complex.max_scale if cap is None and b.complex is not None else cap
    out = []
    for iv in b.in_dim(dim):
        death = iv.death if not math.isinf(iv.death) or cap is None else max(cap, iv.birth)
        out.append(death - iv.birth)
    return np.asarray(out, dtype=float)


def dominant_count(b: Barcode, dim: int = 1, cap: Optional[float] = None) -> int:
    """Number of intervals above the largest drop between consecutive persistences.

    Differences rather than ratios, so that the crowd of near-zero intervals
    at the tail cannot produce a spurious gap.
    """
    p = np.sort(truncated_persistence(b, dim, cap))[::-1]
    if p.size <= 1:
        return int(p.size)
    return int(np.argmax(p[:-1] - p[1:])) + 1


def persist(cloud, n_landmarks: int, max_scale: Union[float, str, None] = "auto",
            prime: int = DEFAULT_PRIME, seed: Optional[int] = None) -> PersistResult:
    """Maxmin landmarks, Rips 2-skeleton up to ``max_scale`` and its degree-1 barcode.

    ``max_scale='auto'`` uses ``4.1`` times the cover radius of the landmarks.
    """
    if not is_prime(prime) or prime <= 2:
        raise ValidationError(f"prime must be an odd prime, got {prime}")
    cloud = as_cloud(cloud)
    landmarks, r = maxmin_sample(cloud, n_landmarks, seed=seed)
    if max_scale in (None, "auto"):
        max_scale = AUTO_MAX_SCALE_FACTOR * r
    K = vietoris_rips(cloud.points[landmarks], float(max_scale))
    return PersistResult(cloud, landmarks, r, K, persistent_cohomology(K, prime), seed)


def resolve_epsilon(epsilon: Union[float, str, None], cover_radius: float) -> float:
    if epsilon in (None, "auto"):
        return AUTO_EPSILON_FACTOR * cover_radius
    eps = float(epsilon)
    if not eps > 0:
        raise ValidationError("epsilon must be positive")
    return eps


def coordinates(res: PersistResult, classes: Sequence[int], epsilon: Union[float, str, None] = "auto",
                inner_product: str = "dsmv", knn: int = DEFAULT_KNN, bandwidth: Optional[float] = None,
                mode: str = "toroidal", sparse: bool = True, seed: Optional[int] = None,
                correlate: bool = True) -> CoordinatesResult:
    """Coordinates for the selected classes at scale ``epsilon``.

    In toroidal mode the per-class circular coordinates are computed too and
    both Dirichlet correlation matrices are returned. Dense mode produces
    maps on the landmarks only.
    """
    if mode not in ("circular", "toroidal"):
        raise ValidationError(f"mode must be 'circular' or 'toroidal', got {mode!r}")
    if inner_product not in ("dsmv", "dirichlet"):
        raise ValidationError(f"inner product must be 'dsmv' or 'dirichlet', got {inner_product!r}")
    classes = list(classes)
    if not classes:
        raise ValidationError("select at least one class")
    eps = resolve_epsilon(epsilon, res.cover_radius)
    if eps > res.max_scale:
        raise ValidationError(f"epsilon {eps:g} exceeds the computed scale {res.max_scale:g}")
    sel = select_classes(res.barcode, eps, classes)
    K = sel.complex
    alphas = [lift_to_integer(c) for c in sel.classes]

    X = res.cloud.points
    target = X if sparse else X[res.landmarks]
    graph = None
    # the k-NN graph is built before the cover so the sparse path never
    # revisits distances between data points afterwards
    if correlate or inner_product == "dirichlet":
        graph = neighbor_graph(target, knn, bandwidth)
    cover = partition_of_unity(X, (X[res.landmarks], res.landmarks), eps) if sparse else None
    if inner_product == "dirichlet":
        if cover is None:
            cover = partition_of_unity(X, (X[res.landmarks], res.landmarks), eps)
            dirichlet_graph = neighbor_graph(X, knn, bandwidth)
        else:
            dirichlet_graph = graph
        form = estimated_dirichlet_form(cover, dirichlet_graph, K)
        if not sparse:
            cover = None
    else:
        form = dsmv_form(K)

    circ = independent_circular_coordinates(alphas, form, K, cover, seed)
    out = CoordinatesResult(circ, eps, classes, cover, None, None, None, form.kind)
    if mode == "toroidal":
        out.circular_map = circ
        out.torus_map = toroidal_coordinates(alphas, form, K, cover, seed)
    if correlate:
        out.D_scc = correlation_matrix(circ.maps, graph)
        out.D_stc = correlation_matrix(out.torus_map.maps, graph)
    return out
