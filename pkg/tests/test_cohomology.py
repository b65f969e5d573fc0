import math

import numpy as np
import pytest

from toroidal.cohomology import (is_prime, lift_to_integer, persistent_cohomology, select_classes,
                                 symmetric_lift)
from toroidal.complex import Cocycle1, FiltrationComplex, check_cocycle, coboundary, vietoris_rips
from toroidal.errors import ClassDeadError, LiftError, ValidationError

from conftest import unit_square


def betti_one(K):
    """Rank of H^1 over the rationals from matrix ranks (independent of the reduction)."""
    m = K.n_edges
    if m == 0:
        return 0
    d0 = K.coboundary_matrix.toarray()
    r0 = np.linalg.matrix_rank(d0) if d0.size else 0
    r1 = 0
    if K.n_triangles:
        d1 = np.zeros((K.n_triangles, m))
        te = K.triangle_edges
        rows = np.arange(K.n_triangles)
        d1[rows, te[:, 0]] += 1
        d1[rows, te[:, 1]] += 1
        d1[rows, te[:, 2]] -= 1
        r1 = np.linalg.matrix_rank(d1)
    return m - r1 - r0


def test_is_prime():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


class TestPersistence:
    def test_square_cycle(self):
        K = vietoris_rips(unit_square(), 1.5)
        b = persistent_cohomology(K, 41)
        h1 = b.in_dim(1)
        assert len(h1) == 1
        assert h1[0].birth == pytest.approx(1.0) and h1[0].death == pytest.approx(math.sqrt(2))
        rep = h1[0].representative
        assert np.count_nonzero(rep.values) >= 1
        for s in (1.0, 1.2, 1.41):
            Ks = K.restrict(s)
            assert check_cocycle(Ks, rep.restrict(Ks))

    def test_filled_triangle(self):
        K = FiltrationComplex.from_simplices(3, [[0, 1, 1], [1, 2, 1], [0, 2, 1]], [[0, 1, 2, 1]])
        assert persistent_cohomology(K).in_dim(1) == []

    def test_two_disjoint_squares(self):
        X = np.vstack([unit_square(), unit_square() + 10.0])
        b = persistent_cohomology(vietoris_rips(X, 1.5))
        h1 = b.in_dim(1)
        assert len(h1) == 2
        assert h1[0].birth == h1[1].birth and h1[0].death == h1[1].death
        assert sum(math.isinf(iv.death) for iv in b.in_dim(0)) == 2

    def test_bad_prime(self):
        K = vietoris_rips(unit_square(), 1.5)
        for p in (2, 40, 1 << 15 | 1, 65537):
            with pytest.raises(ValidationError):
                persistent_cohomology(K, p)

    def test_sorted_by_persistence(self, rng):
        b = persistent_cohomology(vietoris_rips(rng.random((30, 2)), 0.6))
        pers = [iv.persistence for iv in b.intervals]
        assert pers == sorted(pers, reverse=True)

    @pytest.mark.parametrize("seed", range(6))
    def test_interval_counts_match_betti_numbers(self, seed):
        rng = np.random.default_rng(seed)
        t = rng.random(25)
        X = np.column_stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)]) + 0.15 * rng.random((25, 2))
        K = vietoris_rips(X, 1.2)
        b = persistent_cohomology(K)
        scales = np.unique(np.concatenate([K.edge_values, K.triangle_values]))
        for s in scales[::7]:
            Ks = K.restrict(s)
            assert b.count_alive(1, s) == betti_one(Ks)
            assert b.count_alive(0, s) == Ks.components()[0]

    def test_representatives_valid_over_lifetime(self, rng):
        X = rng.random((40, 2))
        K = vietoris_rips(X, 0.5)
        for iv in persistent_cohomology(K).in_dim(1):
            end = min(iv.death, K.max_scale)
            for s in (iv.birth, 0.5 * (iv.birth + end)):
                Ks = K.restrict(s)
                assert check_cocycle(Ks, iv.representative.restrict(Ks))

    def test_field_independence(self, rng):
        t = rng.random(40)
        X = np.column_stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)])
        K = vietoris_rips(X, 1.0)
        key = lambda b: sorted((iv.dim, iv.birth, iv.death) for iv in b.intervals)
        assert key(persistent_cohomology(K, 41)) == key(persistent_cohomology(K, 47))

    def test_deterministic(self, rng):
        K = vietoris_rips(rng.random((30, 3)), 0.7)
        a, b = persistent_cohomology(K), persistent_cohomology(K)
        assert [(i.birth, i.death) for i in a.intervals] == [(i.birth, i.death) for i in b.intervals]
        for x, y in zip(a.in_dim(1), b.in_dim(1)):
            assert np.array_equal(x.representative.values, y.representative.values)

    def test_adding_coboundary_keeps_class_alive(self, rng):
        # a cohomologous representative is still a cocycle representing a nonzero class
        K = vietoris_rips(unit_square(), 1.5)
        iv = persistent_cohomology(K).in_dim(1)[0]
        Ks = K.restrict(1.2)
        rep = iv.representative.restrict(Ks)
        shifted = rep + coboundary(Ks, rng.integers(0, 41, 4), ring="Zp", prime=41)
        assert check_cocycle(Ks, shifted)
        lifted = lift_to_integer(shifted)
        # winding around the square is the same nonzero residue
        loop = lambda c: (c(0, 1) + c(1, 2) + c(2, 3) - c(0, 3)) % 41
        assert loop(rep) == loop(shifted) != 0
        assert check_cocycle(Ks, lifted)


class TestSelect:
    def test_square(self):
        K = vietoris_rips(unit_square(), 1.5)
        sel = select_classes(persistent_cohomology(K), 1.2, [0])
        assert len(sel.classes) == 1
        assert sel.complex.n_edges == 4
        assert check_cocycle(sel.complex, sel.classes[0])

    def test_empty_selection(self):
        K = vietoris_rips(unit_square(), 1.5)
        assert select_classes(persistent_cohomology(K), 1.2, []).classes == []

    def test_dead_class(self):
        K = vietoris_rips(unit_square(), 1.5)
        with pytest.raises(ClassDeadError, match="class dead at scale"):
            select_classes(persistent_cohomology(K), 1.45, [0])

    def test_bad_index(self):
        K = vietoris_rips(unit_square(), 1.5)
        with pytest.raises(ValidationError):
            select_classes(persistent_cohomology(K), 1.2, [3])


class TestLift:
    def test_symmetric_values(self):
        assert symmetric_lift(np.array([40, 3, 20, 21, 0]), 41).tolist() == [-1, 3, 20, -20, 0]

    def test_zero(self):
        K = vietoris_rips(unit_square(), 1.5)
        z = lift_to_integer(Cocycle1(K, np.zeros(6, dtype=int), "Zp", 41))
        assert z.ring == "Z" and not np.any(z.values)

    def test_hollow_triangle(self):
        K = FiltrationComplex.from_simplices(3, [[0, 1, 1], [1, 2, 2], [0, 2, 3]])
        z = lift_to_integer(Cocycle1(K, [1, 0, 0], "Zp", 41))
        assert z.values.tolist() == [1, 0, 0] and check_cocycle(K, z)

    def test_lift_failure(self):
        # 10 + 10 = 20 is a cocycle mod 41 and lifts; 15 + 15 = 30 wraps to -11 and does not
        K = FiltrationComplex.from_simplices(3, [[0, 1, 1], [1, 2, 2], [0, 2, 3]], [[0, 1, 2, 3]])
        ok = lift_to_integer(Cocycle1(K, [10, 10, 20], "Zp", 41))
        assert ok.values.tolist() == [10, 10, 20]
        with pytest.raises(LiftError, match="lift failed"):
            lift_to_integer(Cocycle1(K, [15, 15, 30], "Zp", 41))

    def test_requires_mod_p(self):
        K = vietoris_rips(unit_square(), 1.5)
        with pytest.raises(ValidationError):
            lift_to_integer(Cocycle1(K, np.zeros(6), "R"))
