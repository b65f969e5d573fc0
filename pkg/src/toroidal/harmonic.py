"""Harmonic (minimum-norm) representatives of integer cohomology classes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .complex import Cochain0, Cocycle1, FiltrationComplex, check_cocycle
from .errors import ConvergenceError, ValidationError
from .metrics import InnerProductForm, dsmv_form

CG_TOL = 1e-10
DIRECT_MAX_VERTICES = 5000


@dataclass
class HarmonicResult:
    theta: Cocycle1
    tau: Cochain0
    residual_norm: float
    class_id: Optional[int] = None


def conjugate_gradient(A, b, tol: float = CG_TOL, maxiter: Optional[int] = None, x0=None):
    """Jacobi-preconditioned conjugate gradients for a symmetric positive definite ``A``.

    Returns ``(x, relative_residual, iterations)``; raises
    :class:`ConvergenceError` if ``maxiter`` is hit first.
    """
    n = b.shape[0]
    maxiter = 10 * n if maxiter is None else maxiter
    bnorm = np.linalg.norm(b)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    if bnorm == 0:
        return np.zeros(n), 0.0, 0
    diag = A.diagonal() if sp.issparse(A) else np.diag(A)
    inv_diag = np.where(diag > 0, 1.0 / np.where(diag > 0, diag, 1.0), 1.0)
    r = b - A @ x
    z = inv_diag * r
    p = z.copy()
    rz = r @ z
    for it in range(1, maxiter + 1):
        Ap = A @ p
        alpha = rz / (p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        res = np.linalg.norm(r) / bnorm
        if res <= tol:
            return x, res, it
        z = inv_diag * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise ConvergenceError(
        f"conjugate gradients did not converge in {maxiter} iterations "
        f"(relative residual {res:.3e})", residual=res)


def _anchored_system(K: FiltrationComplex, Q, eta_values):
    """Normal equations ``d^T Q d tau = d^T Q eta`` with one vertex per component pinned."""
    d = K.coboundary_matrix
    L = (d.T @ Q @ d).tocsc()
    rhs = d.T @ (Q @ eta_values)
    _, labels = K.components()
    n = K.vertex_count
    # lowest-index vertex of each component
    anchors = np.unique(labels, return_index=True)[1]
    free = np.setdiff1d(np.arange(n), anchors)
    return L, rhs, free


def harmonic_representative(eta: Cocycle1, form: Optional[InnerProductForm] = None,
                            K: Optional[FiltrationComplex] = None, *, method: str = "auto",
                            tol: float = CG_TOL, class_id: Optional[int] = None) -> HarmonicResult:
    """Least-squares harmonic representative ``theta = eta - delta tau``.

    Parameters
    ----------
    eta : Cocycle1
        Integer (or real) cocycle on ``K``.
    form : InnerProductForm, optional
        Defaults to the edge-wise dot product.
    method : {"auto", "direct", "cg"}
        ``auto`` factorises directly up to 5000 vertices, otherwise uses
        conjugate gradients (tolerance ``tol``, at most ``10 n`` iterations).
    """
    K = eta.complex if K is None else K
    if not eta.complex.same_edges(K):
        raise ValidationError("cocycle does not live on K")
    if eta.ring == "Zp":
        raise ValidationError("lift the class to the integers first")
    if not check_cocycle(K, eta):
        raise ValidationError("input is not a cocycle")
    form = dsmv_form(K) if form is None else form
    if not form.complex.same_edges(K):
        raise ValidationError("form is defined on a different complex")
    Q = form.operator()
    ev = eta.values.astype(float)
    L, rhs, free = _anchored_system(K, Q, ev)
    tau = np.zeros(K.vertex_count)
    residual = 0.0
    if free.size and K.n_edges:
        A = L[free][:, free].tocsc()
        b = rhs[free]
        if method == "auto":
            method = "direct" if free.size <= DIRECT_MAX_VERTICES else "cg"
        if method == "direct":
            x = splu(A).solve(b)
        elif method == "cg":
            x, _, _ = conjugate_gradient(A, b, tol=tol)
        else:
            raise ValidationError(f"unknown method {method!r}")
        tau[free] = x
        bn = np.linalg.norm(b)
        residual = float(np.linalg.norm(A @ x - b) / bn) if bn > 0 else 0.0
    d = K.coboundary_matrix
    theta = Cocycle1(K, ev - d @ tau, "R")
    return HarmonicResult(theta, Cochain0(tau, "R"), residual, class_id)


def harmonic_projection_defect(theta: Cocycle1, form: Optional[InnerProductForm] = None) -> np.ndarray:
    """``<theta, delta e_v>`` for every vertex ``v``; zero iff ``theta`` is harmonic."""
    K = theta.complex
    Q = (dsmv_form(K) if form is None else form).operator()
    return K.coboundary_matrix.T @ (Q @ theta.values)
