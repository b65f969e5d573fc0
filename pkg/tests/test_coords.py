import numpy as np
import pytest

from toroidal.complex import Cocycle1, FiltrationComplex, coboundary, maxmin_sample, vietoris_rips
from toroidal.coords import (CircleMap, CoverData, circular_coordinates, integrate,
                             partition_of_unity, sparse_integrate, toroidal_coordinates)
from toroidal.errors import CoverError, DependentClassesError, IntegralityError, NerveEdgeError
from toroidal.harmonic import harmonic_representative
from toroidal.metrics import dsmv_form

from conftest import circle_sample, cycle_complex


def circ_dist(a, b):
    d = np.abs(np.asarray(a) - np.asarray(b)) % 1.0
    return np.minimum(d, 1.0 - d)


def rotation_gap(f, g):
    """Max circular distance after aligning the two maps at point 0."""
    return circ_dist(f - f[0], g - g[0]).max()


def winding_setup(rng, n=60, scale=0.5):
    t = np.sort(rng.random(n))
    K = vietoris_rips(np.column_stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)]), scale)
    i, j = K.edges[:, 0], K.edges[:, 1]
    return t, K, Cocycle1(K, -np.rint(t[j] - t[i]), "Z")


def random_integral(K, rng, base):
    """Integer class plus a real coboundary: an integral real cocycle."""
    eta = base * int(rng.integers(1, 3)) + coboundary(K, rng.integers(-2, 3, K.vertex_count), ring="Z")
    return Cocycle1(K, eta.values.astype(float), "R") + coboundary(K, rng.standard_normal(K.vertex_count))


class TestIntegrate:
    def test_three_cycle(self):
        K = cycle_complex(3)
        f = integrate(Cocycle1(K, [1 / 3, 1 / 3, -1 / 3]))
        assert np.allclose(f.values, [0, 1 / 3, 2 / 3])
        assert f.basepoints == [0]

    def test_coboundary_gives_potential(self, rng):
        K = vietoris_rips(rng.random((20, 2)), 0.5)
        tau = rng.standard_normal(20) * 3
        f = integrate(coboundary(K, tau), K)
        _, labels = K.components()
        for c in np.unique(labels):
            idx = np.flatnonzero(labels == c)
            assert circ_dist(f.values[idx] - f.values[idx[0]], (tau[idx] - tau[idx[0]]) % 1).max() < 1e-9

    def test_zero(self, rng):
        K = vietoris_rips(rng.random((15, 2)), 0.6)
        assert np.all(integrate(Cocycle1(K, np.zeros(K.n_edges))).values == 0)

    def test_non_integral(self):
        K = cycle_complex(3)
        with pytest.raises(IntegralityError, match="does not represent an integral class"):
            integrate(Cocycle1(K, [0.3, 0.3, -0.3]))

    def test_values_in_unit_interval(self, rng):
        t, K, eta = winding_setup(rng)
        f = integrate(Cocycle1(K, -eta.values.astype(float) * 1e-17 + eta.values)).values
        assert np.all((f >= 0) & (f < 1))

    @pytest.mark.parametrize("seed", range(5))
    def test_choice_independence(self, seed):
        rng = np.random.default_rng(seed)
        t, K, eta = winding_setup(rng)
        theta = random_integral(K, rng, eta)
        a, b = integrate(theta, K, seed=1), integrate(theta, K, seed=2)
        assert rotation_gap(a.values, b.values) <= 1e-9
        assert rotation_gap(a.values, integrate(theta, K).values) <= 1e-9

    def test_additivity(self, rng):
        t, K, eta = winding_setup(rng)
        a, b = random_integral(K, rng, eta), random_integral(K, rng, eta)
        lhs = integrate(a + b).values
        rhs = (integrate(a).values + integrate(b).values) % 1
        assert circ_dist(lhs, rhs).max() <= 1e-9


class TestPartitionOfUnity:
    def test_equidistant(self):
        c = partition_of_unity(np.array([[0.5, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]]), 2.0)
        assert np.allclose(c.phi.toarray(), [[0.5, 0.5]])

    def test_coincident_only(self):
        c = partition_of_unity(np.array([[0.0, 0.0]]), np.array([[0.0, 0.0], [5.0, 0.0]]), 2.0)
        assert np.allclose(c.phi.toarray(), [[1.0, 0.0]])

    def test_tent_by_hand(self):
        c = partition_of_unity(np.array([[0.0], [1.0]]), np.array([[0.0], [1.0]]), 3.0)
        assert np.allclose(c.phi.toarray()[0], [0.75, 0.25])

    def test_uncovered(self):
        with pytest.raises(CoverError, match="increase epsilon or landmarks") as info:
            partition_of_unity(np.array([[0.0], [5.0]]), np.array([[0.0]]), 2.0)
        assert info.value.index == 1

    def test_invariants(self, rng):
        X = rng.random((300, 2))
        L, r = maxmin_sample(X, 20)
        eps = 2.05 * r
        c = partition_of_unity(X, (X[L], L), eps)
        assert np.allclose(np.asarray(c.phi.sum(axis=1)).ravel(), 1.0, atol=1e-12)
        coo = c.phi.tocoo()
        d = np.linalg.norm(X[coo.row] - X[L][coo.col], axis=1)
        assert np.all(d < eps / 2) and np.all(coo.data > 0)
        assert c.landmarks.tolist() == L.tolist()

    def test_base_landmark_tie_break(self):
        c = partition_of_unity(np.array([[0.5, 0.0]]), np.array([[1.0, 0.0], [0.0, 0.0]]), 2.0)
        assert c.base_landmarks().tolist() == [0]


class TestSparseIntegrate:
    def test_point_at_landmark(self):
        K = cycle_complex(3)
        theta = Cocycle1(K, [1 / 3, 1 / 3, -1 / 3])
        phi = np.eye(3)
        import scipy.sparse as sp
        cover = CoverData(np.arange(3), 1.0, sp.csr_matrix(phi))
        assert np.allclose(sparse_integrate(theta, cover).values, integrate(theta).values)

    def test_two_term_formula(self):
        import scipy.sparse as sp
        K = cycle_complex(3)
        theta = Cocycle1(K, [1 / 3, 1 / 3, -1 / 3])
        cover = CoverData(np.arange(3), 1.0, sp.csr_matrix(np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])))
        tau = integrate(theta).values
        got = sparse_integrate(theta, cover).values
        assert got[0] == pytest.approx((tau[0] + theta(0, 1) / 2) % 1)
        assert got[1] == pytest.approx((tau[1] + theta(1, 2) / 2) % 1)

    def test_missing_nerve_edge(self):
        import scipy.sparse as sp
        K = FiltrationComplex.from_simplices(3, [[0, 1, 1], [1, 2, 1]])
        cover = CoverData(np.arange(3), 1.0, sp.csr_matrix(np.array([[0.5, 0.0, 0.5]])))
        with pytest.raises(NerveEdgeError, match="nerve edge absent"):
            sparse_integrate(Cocycle1(K, [0.0, 0.0]), cover)

    def test_circle_winding_one(self):
        X, t = circle_sample(2000, seed=3)
        L, r = maxmin_sample(X, 8)
        eps = 2.05 * r
        K = vietoris_rips(X[L], eps)
        ang = t[L]
        i, j = K.edges[:, 0], K.edges[:, 1]
        eta = Cocycle1(K, -np.rint(ang[j] - ang[i]), "Z")
        theta = harmonic_representative(eta).theta
        f = sparse_integrate(theta, partition_of_unity(X, (X[L], L), eps)).values
        steps = ((np.diff(np.append(f, f[0])) + 0.5) % 1) - 0.5
        assert abs(round(steps.sum())) == 1
        # monotone: flat inside a single ball, never stepping backwards
        assert np.all(steps * np.sign(steps.sum()) >= -1e-12)

    def test_agrees_with_dense_on_landmarks(self, rng):
        t, K, eta = winding_setup(rng, 40, 0.6)
        X = np.column_stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)])
        theta = harmonic_representative(eta).theta
        # tiny balls: every landmark row is a standard basis vector
        cover = partition_of_unity(X, (X, np.arange(40)), 1e-6)
        assert rotation_gap(sparse_integrate(theta, cover).values, integrate(theta).values) <= 1e-9


class TestTopLevel:
    def test_circular_three_cycle(self):
        f = circular_coordinates(Cocycle1(cycle_complex(3), [1, 0, 0], "Z"))
        assert np.allclose(f.values, [0, 1 / 3, 2 / 3])

    def test_circular_coboundary_is_constant(self, rng):
        K = vietoris_rips(rng.random((20, 2)), 0.6)
        f = circular_coordinates(coboundary(K, rng.integers(-3, 3, 20), ring="Z")).values
        assert circ_dist(f, f[0]).max() < 1e-9

    def test_circular_four_cycle(self):
        f = circular_coordinates(Cocycle1(cycle_complex(4), [1, 0, 0, 0], "Z")).values
        assert np.allclose(f, [0, 0.25, 0.5, 0.75])

    def test_toroidal_single_class(self):
        eta = Cocycle1(cycle_complex(5), [1, 0, 0, 0, 0], "Z")
        tm = toroidal_coordinates([eta])
        assert tm.M == [[1]] and tm.k == 1
        assert np.allclose(tm.maps[0].values, circular_coordinates(eta).values)

    def test_toroidal_integrates_recombined_classes(self):
        # theta graph: two loops sharing the path 0-1-2, so the harmonic classes correlate
        K = FiltrationComplex.from_simplices(
            6, [[0, 1, 1], [1, 2, 1], [2, 3, 1], [0, 3, 1], [2, 4, 1], [4, 5, 1], [0, 5, 1]])
        e03, e05 = K.edge_index(0, 3), K.edge_index(0, 5)
        a = np.zeros(7, int); a[e03] = 1
        b = np.zeros(7, int); b[e05] = 1
        # the second class winds around both loops, so the pair is far from reduced
        alphas = [Cocycle1(K, a, "Z"), Cocycle1(K, a + b, "Z")]
        tm = toroidal_coordinates(alphas)
        etas = [harmonic_representative(x).theta.values for x in alphas]
        for row, fmap in zip(tm.M, tm.maps):
            combo = Cocycle1(K, row[0] * etas[0] + row[1] * etas[1])
            assert circ_dist(fmap.values, integrate(combo).values).max() < 1e-9
        form = dsmv_form(K)
        before = sum(form(Cocycle1(K, e), Cocycle1(K, e)) for e in etas)
        assert sum(form(t, t) for t in tm.cocycles) < before

    def test_group_action(self, rng):
        K = FiltrationComplex.from_simplices(
            5, [[0, 1, 1], [1, 2, 1], [0, 2, 1], [0, 3, 1], [3, 4, 1], [0, 4, 1]])
        th = [harmonic_representative(Cocycle1(K, v, "Z")).theta
              for v in ([1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0])]
        U = np.array([[2, 1], [1, 1]])
        F = np.column_stack([integrate(t).values for t in th])
        G = np.column_stack([integrate(Cocycle1(K, U[r, 0] * th[0].values + U[r, 1] * th[1].values)).values
                             for r in range(2)])
        assert circ_dist(G, (F @ U.T) % 1).max() < 1e-9

    def test_dependent_classes(self):
        eta = Cocycle1(cycle_complex(4), [1, 0, 0, 0], "Z")
        with pytest.raises(DependentClassesError):
            toroidal_coordinates([eta, eta])


def test_circle_map_wraps():
    assert CircleMap(np.array([-1e-18, 1.25, -0.25])).values.tolist() == [0.0, 0.25, 0.75]
