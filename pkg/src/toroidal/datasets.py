"""Synthetic point clouds, matrix ingestion and sliding-window embeddings."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .complex import PointCloud
from .errors import NumericalError, ValidationError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TimeSeries:
    samples: np.ndarray  # shape (T, N)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim == 1:
            s = s[:, None]
        if s.ndim != 2 or s.shape[0] < 1:
            raise ValidationError("time series needs shape (T, N) with T >= 1")
        object.__setattr__(self, "samples", s)

    @property
    def length(self) -> int:
        return self.samples.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]


@dataclass(frozen=True)
class SlidingWindowCloud:
    cloud: PointCloud
    d: int
    tau: int


def sliding_window(ts, d: int, tau: int) -> SlidingWindowCloud:
    """Delay embedding: row ``t`` is ``[F(t), F(t + tau), ..., F(t + d tau)]``."""
    if not isinstance(ts, TimeSeries):
        ts = TimeSeries(ts)
    if d < 0 or tau < 1:
        raise ValidationError("need d >= 0 and tau >= 1")
    T = ts.length
    count = T - d * tau
    if count < 1:
        raise ValidationError(f"series of length {T} too short for d={d}, tau={tau}")
    idx = np.arange(count)[:, None] + tau * np.arange(d + 1)[None, :]
    windows = ts.samples[idx].reshape(count, -1)
    return SlidingWindowCloud(PointCloud(windows), d, tau)


def synth_torus(n: int, seed: int = 0, return_angles: bool = False):
    """Uniform sample of the flat torus ``(cos 2pi u, sin 2pi u, cos 2pi v, sin 2pi v)``."""
    if n < 4:
        raise ValidationError("synth_torus needs n >= 4")
    rng = np.random.default_rng(seed)
    angles = rng.random((n, 2))
    cloud = PointCloud(torus_embedding(angles))
    return (cloud, angles) if return_angles else cloud


def torus_embedding(angles) -> np.ndarray:
    a = np.atleast_2d(np.asarray(angles, dtype=float)) * TWO_PI
    return np.column_stack([np.cos(a[:, 0]), np.sin(a[:, 0]), np.cos(a[:, 1]), np.sin(a[:, 1])])


GENUS2_MAJOR = 1.0
GENUS2_MINOR = 0.5
GENUS2_OFFSET = 1.1


def _torus_implicit(P, cx):
    x, y, z = P[:, 0], P[:, 1], P[:, 2]
    return (np.sqrt((x - cx) ** 2 + y ** 2) - GENUS2_MAJOR) ** 2 + z ** 2 - GENUS2_MINOR ** 2


def genus2_implicit(P) -> np.ndarray:
    """Implicit function of a double torus, negative inside the handlebody.

    The handlebody is the union of two solid tori (core radius 1, tube
    radius 1/2) centred at ``x = -1.1`` and ``x = 1.1``; they overlap in a
    ball around the origin, so the boundary ``f = 0`` has genus two.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    return np.minimum(_torus_implicit(P, GENUS2_OFFSET), _torus_implicit(P, -GENUS2_OFFSET))


def synth_genus2(n: int, seed: int = 0, tol: float = 0.01, max_draws: int = 50_000_000) -> PointCloud:
    """Rejection sample of the thin shell ``|f| <= tol`` around the double torus."""
    if n < 100:
        raise ValidationError("synth_genus2 needs n >= 100")
    if not 0 < tol <= 0.05:
        raise ValidationError("tol must lie in (0, 0.05]")
    rng = np.random.default_rng(seed)
    half = np.array([GENUS2_OFFSET + GENUS2_MAJOR + GENUS2_MINOR,
                     GENUS2_MAJOR + GENUS2_MINOR, GENUS2_MINOR + tol])
    out, have, drawn = [], 0, 0
    batch = max(20 * n, 10_000)
    while have < n:
        if drawn >= max_draws:
            raise NumericalError(f"rejection budget of {max_draws} draws exceeded")
        P = half * (2.0 * rng.random((batch, 3)) - 1.0)
        drawn += batch
        keep = P[np.abs(genus2_implicit(P)) <= tol]
        out.append(keep)
        have += len(keep)
    return PointCloud(np.concatenate(out)[:n])


def tent_response(d, slope: float = 3.0):
    """Sensor response ``max(0, 1 - slope * d)`` to circular distance ``d``."""
    return np.maximum(0.0, 1.0 - slope * np.asarray(d, dtype=float))


def circular_distance(a, b):
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % 1.0
    return np.minimum(d, 1.0 - d)


def synth_neuro(seed: int = 0, n_circles: int = 3, n_sensors: int = 6, n_walks: int = 50,
                n_steps: int = 50, step: float = 0.05):
    """Head-direction style population responses on three independent circles.

    Each circle carries ``n_sensors`` sensors at positions ``j / n_sensors``.
    On every circle ``n_walks`` random walks of ``n_steps`` steps (uniform
    increments in ``[-step, step]``, wrapped mod 1, uniform starting point)
    are concatenated in time. Returns the ``(n_walks * n_steps, n_circles *
    n_sensors)`` response cloud and the true positions, one column per circle.
    """
    rng = np.random.default_rng(seed)
    T = n_walks * n_steps
    truth = np.empty((T, n_circles))
    for c in range(n_circles):
        starts = rng.random(n_walks)
        incr = rng.uniform(-step, step, size=(n_walks, n_steps))
        incr[:, 0] = 0.0
        truth[:, c] = ((starts[:, None] + np.cumsum(incr, axis=1)) % 1.0).reshape(-1)
    sensors = np.arange(n_sensors) / n_sensors
    resp = tent_response(circular_distance(truth[:, :, None], sensors[None, None, :]))
    return PointCloud(resp.reshape(T, n_circles * n_sensors)), truth


def ingest_matrix(path, orientation: str = "rows") -> TimeSeries:
    """Read a numeric CSV matrix; ``orientation='rows'`` means one row per time step."""
    if orientation not in ("rows", "columns"):
        raise ValidationError("orientation must be 'rows' or 'columns'")
    rows = []
    with open(path, newline="") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                raise ValidationError(f"{path}:{line_no}: non-numeric cell") from None
    if not rows:
        raise ValidationError(f"{path}: empty matrix")
    if len({len(r) for r in rows}) != 1:
        raise ValidationError(f"{path}: ragged rows")
    A = np.array(rows)
    return TimeSeries(A if orientation == "rows" else A.T)
