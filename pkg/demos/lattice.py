"""Lattice reduction on its own: LLL against the exhaustive optimum.

A skewed basis of Z^3 under a Gram matrix is reduced by LLL; the total
squared length is compared with the best basis found by enumeration. The
enumeration only searches small coefficients, so it runs relative to the
reduced basis: relative to the skewed input the optimum can need large ones.
"""
import numpy as np

from toroidal.lattice import basis_energy, brute_force_min_basis, cholesky, lll_reduce

rng = np.random.default_rng(1)
for trial in range(5):
    B = rng.standard_normal((3, 3))
    S = np.array([[1, 3, -2], [0, 1, 4], [0, 0, 1]])
    G = S @ B @ B.T @ S.T
    res = lll_reduce(cholesky(G))
    Mr = np.array(res.M, dtype=float)
    opt, _ = brute_force_min_basis(Mr @ G @ Mr.T, coeff_bound=5)
    print(f"trial {trial}: input {np.trace(G):8.3f}  LLL {basis_energy(G, res.M):7.3f}  "
          f"optimum {opt:7.3f}  bound {4 * opt:7.3f}  M={res.M}")
