import numpy as np
import pytest

from toroidal.complex import FiltrationComplex


def cycle_complex(n):
    """Hollow n-cycle with edges (i, i+1) at increasing values and (0, n-1) last."""
    edges = [[i, i + 1, 1.0 + 0.01 * i] for i in range(n - 1)] + [[0, n - 1, 1.0 + 0.01 * n]]
    return FiltrationComplex.from_simplices(n, edges, [], 2.0)


def unit_square():
    return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def circle_sample(n, seed=0, noise=0.0):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.random(n))
    X = np.column_stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)])
    if noise:
        X += noise * rng.standard_normal(X.shape)
    return X, t


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
