"""Degree-1 persistent cohomology of a filtered 2-skeleton over Z/p.

The coboundary matrix from edges to triangles is reduced column by column,
edges taken in decreasing filtration order; the pivot of a column is its
earliest triangle. Edges that merge connected components (the Kruskal
edges of the filtration) are cleared beforehand since their columns can only
reduce to zero. The recorded column operations give representative cocycles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .complex import Cocycle1, FiltrationComplex, check_cocycle
from .errors import ClassDeadError, LiftError, ValidationError

DEFAULT_PRIME = 41


def is_prime(p: int) -> bool:
    if p < 2 or int(p) != p:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


@dataclass
class Interval:
    dim: int
    birth: float
    death: float
    representative: Optional[Cocycle1] = None
    # index of the birth simplex (vertex for dim 0, edge for dim 1)
    creator: int = -1

    @property
    def persistence(self) -> float:
        return self.death - self.birth

    def contains(self, scale: float) -> bool:
        return self.birth <= scale < self.death


@dataclass
class Barcode:
    intervals: List[Interval]
    prime: int
    complex: Optional[FiltrationComplex] = field(default=None, repr=False)

    def in_dim(self, dim: int) -> List[Interval]:
        return [iv for iv in self.intervals if iv.dim == dim]

    def count_alive(self, dim: int, scale: float) -> int:
        return sum(iv.contains(scale) for iv in self.in_dim(dim))


@dataclass
class CohomologyClassSelection:
    epsilon: float
    classes: List[Cocycle1]
    prime: int
    indices: List[int]
    complex: FiltrationComplex


def _kruskal_edges(K: FiltrationComplex) -> np.ndarray:
    """Boolean mask of edges merging two components, in filtration order."""
    ds = DisjointSet(range(K.vertex_count))
    mask = np.zeros(K.n_edges, dtype=bool)
    for e, (i, j) in enumerate(K.edges.tolist()):
        if not ds.connected(i, j):
            ds.merge(i, j)
            mask[e] = True
    return mask


def _cofacets(K: FiltrationComplex):
    """CSR lists of (triangle rank, sign) per edge; rank = filtration position."""
    te = K.triangle_edges
    T = te.shape[0]
    owner = te.reshape(-1)
    ranks = np.repeat(np.arange(T), 3)
    signs = np.tile(np.array([1, 1, -1]), T)
    order = np.argsort(owner, kind="stable")
    indptr = np.zeros(K.n_edges + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=K.n_edges), out=indptr[1:])
    return indptr, ranks[order], signs[order]


def persistent_cohomology(K: FiltrationComplex, p: int = DEFAULT_PRIME) -> Barcode:
    """Degree 0 and 1 barcode of ``K`` over Z/p with degree-1 representatives.

    Intervals are half-open ``[birth, death)``; classes surviving to the end
    of the filtration get ``death = inf``. Zero-length intervals are dropped.
    Output is sorted by decreasing persistence (ties: dimension, birth,
    creating simplex).
    """
    if not is_prime(p) or not 2 < p < 2 ** 15:
        raise ValidationError(f"prime must satisfy 2 < p < 32768 and be prime, got {p}")
    n, m = K.vertex_count, K.n_edges
    kruskal = _kruskal_edges(K)
    intervals: List[Interval] = []

    # degree 0: every vertex is born at 0; Kruskal edges kill components
    for e in np.flatnonzero(kruskal):
        t = float(K.edge_values[e])
        if t > 0:
            intervals.append(Interval(0, 0.0, t, creator=int(K.edges[e, 1])))
    for _ in range(n - int(kruskal.sum())):
        intervals.append(Interval(0, 0.0, math.inf))

    indptr, cof_rank, cof_sign = _cofacets(K)
    tri_vals = K.triangle_values
    pivot_owner = {}  # triangle rank -> edge
    reduced = {}      # edge -> reduced column {triangle rank: coeff}
    combos = {}       # edge -> column operations {edge: coeff}
    inverse = [0] + [pow(c, p - 2, p) for c in range(1, p)]

    for e in range(m - 1, -1, -1):
        if kruskal[e]:
            continue
        lo, hi = indptr[e], indptr[e + 1]
        col = {int(r): int(s) % p for r, s in zip(cof_rank[lo:hi], cof_sign[lo:hi])}
        combo = {e: 1}
        while col:
            piv = min(col)
            other = pivot_owner.get(piv)
            if other is None:
                break
            ocol = reduced[other]
            factor = (-col[piv] * inverse[ocol[piv]]) % p
            for r, c in ocol.items():
                v = (col.get(r, 0) + factor * c) % p
                if v:
                    col[r] = v
                else:
                    col.pop(r, None)
            for f, c in combos[other].items():
                v = (combo.get(f, 0) + factor * c) % p
                if v:
                    combo[f] = v
                else:
                    combo.pop(f, None)
        birth = float(K.edge_values[e])
        if col:
            piv = min(col)
            pivot_owner[piv] = e
            reduced[e] = col
            combos[e] = combo
            death = float(tri_vals[piv])
        else:
            death = math.inf
        if death > birth:
            rep = np.zeros(m, dtype=np.int64)
            for f, c in combo.items():
                rep[f] = c
            intervals.append(Interval(1, birth, death, Cocycle1(K, rep, "Zp", p), creator=e))

    intervals.sort(key=lambda iv: (-iv.persistence, iv.dim, iv.birth, iv.creator))
    return Barcode(intervals, p, K)


def select_classes(b: Barcode, epsilon: float, indices: Sequence[int],
                   K: Optional[FiltrationComplex] = None) -> CohomologyClassSelection:
    """Pick degree-1 intervals by position in ``b.in_dim(1)``; restrict to scale ``epsilon``."""
    ivs = b.in_dim(1)
    base = K if K is not None else b.complex
    if base is None:
        raise ValidationError("barcode carries no complex; pass K")
    K_eps = base.restrict(epsilon)
    classes = []
    for i in indices:
        if not 0 <= i < len(ivs):
            raise ValidationError(f"no degree-1 interval with index {i}")
        iv = ivs[i]
        if not iv.contains(epsilon):
            raise ClassDeadError(
                f"class dead at scale: interval {i} is [{iv.birth:g}, {iv.death:g}), "
                f"epsilon = {epsilon:g}")
        classes.append(iv.representative.restrict(K_eps))
    return CohomologyClassSelection(float(epsilon), classes, b.prime, list(indices), K_eps)


def symmetric_lift(values: np.ndarray, p: int) -> np.ndarray:
    """Map residues to the representatives in ``(-p/2, p/2]``."""
    v = np.asarray(values, dtype=np.int64) % p
    return np.where(2 * v > p, v - p, v)


def lift_to_integer(theta_p: Cocycle1, K_at_scale: Optional[FiltrationComplex] = None) -> Cocycle1:
    """Symmetric integer lift of a mod-p cocycle, verified over the integers."""
    if theta_p.ring != "Zp":
        raise ValidationError("lift_to_integer expects a mod-p cocycle")
    K = K_at_scale if K_at_scale is not None else theta_p.complex
    src = theta_p.restrict(K) if K is not theta_p.complex else theta_p
    if not check_cocycle(K, src):
        raise ValidationError("input is not a cocycle mod p")
    lifted = Cocycle1(K, symmetric_lift(src.values, theta_p.prime), "Z")
    if not check_cocycle(K, lifted):
        raise LiftError("lift failed; increase p or refine scale")
    return lifted
