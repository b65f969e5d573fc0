"""Dirichlet correlation between circle-valued maps on a point cloud."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coords import CircleMap
from .errors import ValidationError
from .metrics import NeighborGraph


@dataclass
class CorrelationMatrix:
    matrix: np.ndarray
    knn: int
    bandwidth: float

    @property
    def k(self) -> int:
        return self.matrix.shape[0]

    @property
    def off_diagonal_ratio(self) -> float:
        return off_diagonal_ratio(self.matrix)


def circular_lift_difference(a, b):
    """Representative of ``b - a`` mod 1 in ``[-1/2, 1/2)``."""
    d = np.mod(np.asarray(b, dtype=float) - np.asarray(a, dtype=float) + 0.5, 1.0) - 0.5
    # mod can return 1.0 for tiny negative inputs, which would land on +1/2
    return np.where(d >= 0.5, d - 1.0, d)


def _values(f) -> np.ndarray:
    return f.values if isinstance(f, CircleMap) else np.asarray(f, dtype=float)


def _lifted_differences(f, graph: NeighborGraph) -> np.ndarray:
    v = _values(f)
    if v.shape[0] != graph.n_points:
        raise ValidationError(
            f"map has {v.shape[0]} values but the graph has {graph.n_points} points")
    a, b, _ = graph.directed_edges()
    return circular_lift_difference(v[a], v[b])


def _edge_weights(graph: NeighborGraph) -> np.ndarray:
    a, _, h = graph.directed_edges()
    return h / graph.degrees[a]


def estimate_dirichlet(f, g, graph: NeighborGraph) -> float:
    """``sum_a 1/|N(a)| sum_{b in N(a)} h(a, b) l(f(b) - f(a)) l(g(b) - g(a))``."""
    lf = _lifted_differences(f, graph)
    lg = _lifted_differences(g, graph)
    return float(np.sum(_edge_weights(graph) * lf * lg))


def correlation_matrix(maps: Sequence, graph: NeighborGraph) -> CorrelationMatrix:
    """Pairwise Dirichlet estimates of ``maps``, symmetrised by averaging."""
    if len(maps) == 0:
        raise ValidationError("need at least one map")
    L = np.stack([_lifted_differences(f, graph) for f in maps])
    D = (L * _edge_weights(graph)) @ L.T
    D = 0.5 * (D + D.T)
    return CorrelationMatrix(D, graph.k, graph.bandwidth)


def off_diagonal_ratio(D) -> float:
    """``sum_{i != j} D_ij^2 / sum_i D_ii^2`` (zero for a zero matrix)."""
    D = np.asarray(getattr(D, "matrix", D), dtype=float)
    diag = np.sum(np.diag(D) ** 2)
    off = np.sum(D ** 2) - diag
    if diag == 0:
        return 0.0 if off == 0 else float("inf")
    return float(off / diag)
