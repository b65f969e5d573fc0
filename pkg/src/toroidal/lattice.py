"""Gram matrices, Cholesky factors and floating-point LLL with an exact transform.

The integer change-of-basis matrix ``M`` is updated with Python integers in
lockstep with every float row operation, so ``M`` stays exact (and
unimodular) even when the floating-point basis drifts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .complex import Cocycle1
from .errors import DependentClassesError, NumericalError, ValidationError
from .metrics import InnerProductForm

LLL_DELTA = 0.75
MAX_LLL_ITERATIONS = 10 ** 6
PIVOT_RTOL = 1e-10
# |mu| must exceed 1/2 by this much before size reduction kicks in
SIZE_REDUCTION_SLACK = 1e-12


@dataclass
class ReducedBasisResult:
    basis: np.ndarray
    M: List[List[int]]
    input_length: float
    output_length: float

    @property
    def M_array(self) -> np.ndarray:
        return np.array(self.M, dtype=np.int64)


def integer_det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [[int(v) for v in row] for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def is_unimodular(M) -> bool:
    return abs(integer_det(M)) == 1


def gram(etas: Sequence[Cocycle1], form: InnerProductForm) -> np.ndarray:
    k = len(etas)
    G = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            G[i, j] = G[j, i] = form(etas[i], etas[j])
    return 0.5 * (G + G.T)


def cholesky(G) -> np.ndarray:
    """Lower-triangular ``C`` with ``C C^T = G``.

    Raises :class:`DependentClassesError` if a pivot ``C_ii^2`` falls below
    ``1e-10 * trace(G) / k``.
    """
    G = np.asarray(G, dtype=float)
    k = G.shape[0]
    if k == 0:
        return np.zeros((0, 0))
    threshold = PIVOT_RTOL * np.trace(G) / k
    C = np.zeros_like(G)
    for j in range(k):
        pivot = G[j, j] - C[j, :j] @ C[j, :j]
        if not pivot > threshold:
            raise DependentClassesError(
                "cohomology classes not linearly independent over the reals")
        C[j, j] = np.sqrt(pivot)
        C[j + 1:, j] = (G[j + 1:, j] - C[j + 1:, :j] @ C[j, :j]) / C[j, j]
    return C


def _gram_schmidt(B):
    k = B.shape[0]
    Bs = np.zeros_like(B)
    mu = np.zeros((k, k))
    norms = np.zeros(k)
    for i in range(k):
        v = B[i].copy()
        for j in range(i):
            mu[i, j] = (B[i] @ Bs[j]) / norms[j]
            v -= mu[i, j] * Bs[j]
        Bs[i] = v
        norms[i] = v @ v
    return mu, norms


def lll_reduce(rows, lovasz_delta: float = LLL_DELTA) -> ReducedBasisResult:
    """LLL-reduce the rows of a real matrix; track the integer transform ``M``.

    The output rows equal ``M @ rows`` and satisfy ``|mu_ij| <= 1/2`` and the
    Lovasz condition with parameter ``lovasz_delta``.
    """
    B0 = np.atleast_2d(np.asarray(rows, dtype=float))
    if not 0.25 < lovasz_delta < 1:
        raise ValidationError("lovasz_delta must lie in (1/4, 1)")
    k = B0.shape[0]
    if k and np.linalg.matrix_rank(B0) < k:
        raise DependentClassesError("rows are linearly dependent")
    B = B0.copy()
    M = [[int(i == j) for j in range(k)] for i in range(k)]
    mu, norms = _gram_schmidt(B)
    if k and norms.min() <= 0:
        raise DependentClassesError("rows are linearly dependent")
    i, steps = 1, 0
    while i < k:
        steps += 1
        if steps > MAX_LLL_ITERATIONS:
            raise NumericalError("LLL exceeded its iteration cap")
        for j in range(i - 1, -1, -1):
            if abs(mu[i, j]) > 0.5 + SIZE_REDUCTION_SLACK:
                q = int(np.rint(mu[i, j]))
                B[i] -= q * B[j]
                M[i] = [a - q * b for a, b in zip(M[i], M[j])]
                mu[i, :j] -= q * mu[j, :j]
                mu[i, j] -= q
        if norms[i] >= (lovasz_delta - mu[i, i - 1] ** 2) * norms[i - 1]:
            i += 1
        else:
            B[[i - 1, i]] = B[[i, i - 1]]
            M[i - 1], M[i] = M[i], M[i - 1]
            mu, norms = _gram_schmidt(B)
            i = max(i - 1, 1)
    return ReducedBasisResult(B, M, float(np.sum(B0 ** 2)), float(np.sum(B ** 2)))


def low_energy_representatives(etas: Sequence[Cocycle1], form: InnerProductForm,
                               lovasz_delta: float = LLL_DELTA):
    """Integer recombination ``M @ etas`` of harmonic cocycles with small total energy.

    Returns ``(thetas, M)``. The total squared norm of the output is at most
    ``2**(k-1)`` times the optimum over all bases of the same subgroup.
    """
    k = len(etas)
    if k == 0:
        return [], []
    G = gram(etas, form)
    C = cholesky(G)
    res = lll_reduce(C, lovasz_delta)
    E = np.stack([e.values for e in etas])
    K = etas[0].complex
    thetas = []
    for row in res.M:
        thetas.append(Cocycle1(K, np.asarray(row, dtype=float) @ E, "R"))
    return thetas, res.M


def basis_energy(G, U) -> float:
    """Total squared length ``trace(U G U^T)`` of the basis with coefficients ``U``."""
    U = np.asarray(U, dtype=float)
    return float(np.trace(U @ np.asarray(G, dtype=float) @ U.T))


def brute_force_min_basis(G, coeff_bound: int = 5):
    """Exhaustive minimum of ``trace(U G U^T)`` over unimodular ``U`` with bounded entries.

    Rows are chosen among the integer vectors of the box ``[-b, b]^k`` (one
    of each ``+-v`` pair) in order of increasing length, with branch and
    bound on the running total. Test oracle for ``k <= 4``, ``b <= 6``.
    """
    G = np.asarray(G, dtype=float)
    k = G.shape[0]
    if k > 4:
        raise ValidationError("brute force is limited to k <= 4")
    if coeff_bound > 6 or coeff_bound < 1:
        raise ValidationError("coeff_bound must lie in [1, 6]")
    vecs = []
    for v in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=k):
        nz = [x for x in v if x != 0]
        if nz and nz[0] > 0:
            vecs.append(v)
    V = np.array(vecs, dtype=float)
    lengths = np.einsum("ij,jk,ik->i", V, G, V)
    order = np.argsort(lengths, kind="stable")
    vecs = [vecs[i] for i in order]
    lengths = lengths[order]
    best = float(np.trace(G))
    best_rows = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    chosen = []

    def search(start, total):
        nonlocal best, best_rows
        depth = len(chosen)
        if depth == k:
            if abs(integer_det(chosen)) == 1 and total < best:
                best, best_rows = total, list(chosen)
            return
        for idx in range(start, len(vecs)):
            # remaining rows are at least this long
            if total + (k - depth) * lengths[idx] >= best:
                break
            chosen.append(vecs[idx])
            search(idx + 1, total + lengths[idx])
            chosen.pop()

    search(0, 0.0)
    return best, [list(r) for r in best_rows]
