"""Plain-text file formats: point clouds, complexes, barcodes, maps and matrices.

All writers are deterministic (sorted keys, no timestamps) so that equal
inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .cohomology import Barcode, Interval
from .complex import Cocycle1, FiltrationComplex, PointCloud
from .coords import TorusMap
from .errors import ValidationError


def _dump(path, obj):
    Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def _finite_or_none(x: float):
    return None if math.isinf(x) else float(x)


def read_points(path) -> PointCloud:
    """CSV point cloud, one point per row; a non-numeric first row is a header."""
    rows, header = [], None
    with open(path, newline="") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                if header is None and not rows:
                    header = row
                    continue
                raise ValidationError(f"{path}:{line_no}: non-numeric cell") from None
    if not rows:
        raise ValidationError(f"{path}: no points")
    if len({len(r) for r in rows}) != 1:
        raise ValidationError(f"{path}: rows have different lengths")
    return PointCloud(np.array(rows))


def write_points(path, points, header: Optional[Sequence[str]] = None):
    P = np.atleast_2d(getattr(points, "points", points))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        for row in P:
            w.writerow([repr(float(v)) for v in row])


def complex_to_dict(K: FiltrationComplex) -> dict:
    return {
        "vertices": int(K.vertex_count),
        "edges": [[int(i), int(j), float(t)] for (i, j), t in zip(K.edges, K.edge_values)],
        "triangles": [[int(i), int(j), int(k), float(t)]
                      for (i, j, k), t in zip(K.triangles, K.triangle_values)],
        "max_scale": float(K.max_scale),
    }


def complex_from_dict(d: dict) -> FiltrationComplex:
    try:
        return FiltrationComplex.from_simplices(d["vertices"], d["edges"], d.get("triangles", []),
                                                d.get("max_scale"))
    except KeyError as exc:
        raise ValidationError(f"complex is missing field {exc}") from None


def barcode_to_dict(b: Barcode, **metadata) -> dict:
    out = {"prime": int(b.prime), "intervals": []}
    for iv in b.intervals:
        rec = {"dim": iv.dim, "birth": float(iv.birth), "death": _finite_or_none(iv.death)}
        if iv.representative is not None:
            rec["rep"] = iv.representative.nonzero_entries()
        out["intervals"].append(rec)
    for key, value in metadata.items():
        out[key] = value.tolist() if isinstance(value, np.ndarray) else value
    return out


def barcode_from_dict(d: dict, K: Optional[FiltrationComplex] = None) -> Barcode:
    """Inverse of :func:`barcode_to_dict`; representatives need ``K``."""
    p = int(d["prime"])
    intervals = []
    for rec in d["intervals"]:
        death = math.inf if rec["death"] is None else float(rec["death"])
        rep = None
        if K is not None and "rep" in rec:
            vals = np.zeros(K.n_edges, dtype=np.int64)
            entries = np.asarray(rec["rep"], dtype=np.int64).reshape(-1, 3)
            if entries.size:
                e = K.edge_indices(entries[:, 0], entries[:, 1])
                if np.any(e < 0):
                    raise ValidationError("representative uses an edge missing from the complex")
                vals[e] = entries[:, 2]
            rep = Cocycle1(K, vals, "Zp", p)
        intervals.append(Interval(int(rec["dim"]), float(rec["birth"]), death, rep))
    return Barcode(intervals, p, K)


def write_barcode(path, b: Barcode, **metadata):
    _dump(path, barcode_to_dict(b, **metadata))


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg})") from None


def diagram_table(b: Barcode, limit: Optional[int] = None) -> str:
    """Fixed-width table of intervals sorted by decreasing persistence."""
    lines = [f"{'idx':>4} {'dim':>3} {'birth':>10} {'death':>10} {'persistence':>12}"]
    counters = {}
    for iv in b.intervals[:limit]:
        idx = counters.get(iv.dim, 0)
        counters[iv.dim] = idx + 1
        death = "inf" if math.isinf(iv.death) else f"{iv.death:.6f}"
        pers = "inf" if math.isinf(iv.persistence) else f"{iv.persistence:.6f}"
        lines.append(f"{idx:>4} {iv.dim:>3} {iv.birth:>10.6f} {death:>10} {pers:>12}")
    return "\n".join(lines) + "\n"


def form_triples(form) -> list:
    return form.triples()


def write_torus_map(csv_path, json_path, tm: TorusMap, **metadata):
    """Coordinates as CSV (one row per point) plus a JSON sidecar with ``M``."""
    write_points(csv_path, tm.as_array(), header=[f"theta{j}" for j in range(tm.k)])
    meta = {"k": tm.k, "M": [[int(v) for v in row] for row in tm.M],
            "provenance": list(tm.provenance)}
    for key, value in metadata.items():
        meta[key] = value.tolist() if isinstance(value, np.ndarray) else value
    _dump(json_path, meta)


def matrix_table(D, precision: int = 3) -> str:
    D = np.atleast_2d(np.asarray(D, dtype=float))
    cells = [[f"{v:.{precision}f}" for v in row] for row in D]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells) + "\n"


def write_matrix(json_path, D, txt_path=None, **metadata):
    D = np.asarray(D, dtype=float)
    obj = {"matrix": D.tolist()}
    obj.update(metadata)
    _dump(json_path, obj)
    if txt_path is not None:
        Path(txt_path).write_text(matrix_table(D))
