"""Command line driver: ``python -m toroidal <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import datasets, io, pipeline
from .cohomology import DEFAULT_PRIME
from .complex import vietoris_rips
from .correlation import correlation_matrix
from .coords import CircleMap
from .errors import NumericalError, ValidationError
from .metrics import DEFAULT_KNN, neighbor_graph

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def _epsilon(text):
    return text if text == "auto" else float(text)


def _classes(text):
    try:
        return [int(c) for c in text.split(",") if c.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad class list {text!r}") from None


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_synth(args):
    out = _out_dir(args)
    seed = 0 if args.seed is None else args.seed
    truth = None
    if args.kind == "torus":
        cloud, truth = datasets.synth_torus(args.n or 2000, seed, return_angles=True)
    elif args.kind == "genus2":
        cloud = datasets.synth_genus2(args.n or 4000, seed)
    else:
        cloud, truth = datasets.synth_neuro(seed)
    dim = cloud.points.shape[1]
    io.write_points(out / "points.csv", cloud, header=[f"x{i}" for i in range(dim)])
    if truth is not None:
        io.write_points(out / "truth.csv", truth, header=[f"angle{i}" for i in range(truth.shape[1])])
    print(f"wrote {len(cloud.points)} points to {out / 'points.csv'}")


def _persist_metadata(res: pipeline.PersistResult):
    return {"landmarks": [int(i) for i in res.landmarks], "max_scale": float(res.max_scale),
            "cover_radius": float(res.cover_radius), "seed": res.seed}


def cmd_persist(args):
    cloud = io.read_points(args.input)
    res = pipeline.persist(cloud, args.landmarks, args.max_scale, args.prime, args.seed)
    out = _out_dir(args)
    io.write_barcode(out / "barcode.json", res.barcode, **_persist_metadata(res))
    table = io.diagram_table(res.barcode)
    (out / "diagram.txt").write_text(table)
    print(f"cover radius {res.cover_radius:.6f}, auto epsilon {res.auto_epsilon():.6f}")
    print(f"dominant degree-1 intervals: {pipeline.dominant_count(res.barcode)}")
    print(io.diagram_table(_top_degree1(res.barcode), None), end="")


def _top_degree1(b, n=10):
    return type(b)(b.in_dim(1)[:n], b.prime, b.complex)


def _load_persist(args, cloud) -> pipeline.PersistResult:
    """Reuse a barcode file (rebuilding its complex) or compute persistence afresh."""
    if args.barcode is None:
        return pipeline.persist(cloud, args.landmarks, args.max_scale, args.prime, args.seed)
    meta = io.read_json(args.barcode)
    try:
        landmarks = np.asarray(meta["landmarks"], dtype=int)
        max_scale, cover_radius = float(meta["max_scale"]), float(meta["cover_radius"])
    except KeyError as exc:
        raise ValidationError(f"{args.barcode}: missing field {exc}") from None
    if landmarks.size == 0 or landmarks.max() >= len(cloud.points):
        raise ValidationError("barcode landmarks do not index the input points")
    K = vietoris_rips(cloud.points[landmarks], max_scale)
    b = io.barcode_from_dict(meta, K)
    return pipeline.PersistResult(cloud, landmarks, cover_radius, K, b, meta.get("seed"))


def cmd_coords(args):
    cloud = io.read_points(args.input)
    res = _load_persist(args, cloud)
    classes = args.classes if args.classes is not None else [0]
    cr = pipeline.coordinates(res, classes, args.epsilon, args.inner_product, args.knn,
                              args.bandwidth, args.mode, args.sparse, args.seed)
    out = _out_dir(args)
    meta = {"epsilon": cr.epsilon, "landmarks": [int(i) for i in res.landmarks],
            "classes": cr.classes, "inner_product": cr.form_kind, "seed": args.seed}
    io.write_torus_map(out / "coords.csv", out / "coords.json", cr.torus_map, **meta)
    print(f"epsilon {cr.epsilon:.6f}; M = {cr.torus_map.M}")
    for name, D in (("D_SCC", cr.D_scc), ("D_STC", cr.D_stc)):
        if D is None or (name == "D_STC" and args.mode != "toroidal"):
            continue
        stem = name.lower()
        io.write_matrix(out / f"{stem}.json", D.matrix, out / f"{stem}.txt", knn=D.knn,
                        bandwidth=D.bandwidth, off_diagonal_ratio=D.off_diagonal_ratio)
        print(f"{name} (off-diagonal ratio {D.off_diagonal_ratio:.4g}):")
        print(io.matrix_table(D.matrix), end="")


def cmd_slidingwindow(args):
    ts = datasets.ingest_matrix(args.input, args.orientation)
    sw = datasets.sliding_window(ts, args.d, args.tau)
    out = _out_dir(args)
    io.write_points(out / "points.csv", sw.cloud)
    print(f"wrote {len(sw.cloud.points)} windows of dimension {sw.cloud.points.shape[1]}")


def cmd_correlate(args):
    cloud = io.read_points(args.input)
    values = io.read_points(args.maps).points
    if values.shape[0] != cloud.points.shape[0]:
        raise ValidationError("maps and points have different row counts")
    graph = neighbor_graph(cloud, args.knn, args.bandwidth)
    D = correlation_matrix([CircleMap(values[:, j]) for j in range(values.shape[1])], graph)
    out = _out_dir(args)
    io.write_matrix(out / "correlation.json", D.matrix, out / "correlation.txt", knn=D.knn,
                    bandwidth=D.bandwidth, off_diagonal_ratio=D.off_diagonal_ratio)
    print(io.matrix_table(D.matrix), end="")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toroidal", description="Circular and toroidal coordinates.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", required=True, help="CSV file")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=".", help="output directory")

    s = sub.add_parser("synth", help="write a synthetic point cloud")
    s.add_argument("kind", choices=["torus", "genus2", "neuro"])
    s.add_argument("--n", type=int, default=None, help="number of points (torus, genus2)")
    common(s, needs_input=False)
    s.set_defaults(func=cmd_synth)

    def persistence_flags(sp):
        sp.add_argument("--landmarks", type=int, default=300)
        sp.add_argument("--max-scale", type=_epsilon, default="auto",
                        help="Rips cap, number or 'auto' (4.1 x cover radius)")
        sp.add_argument("--prime", type=int, default=DEFAULT_PRIME)

    s = sub.add_parser("persist", help="degree-1 persistent cohomology of a landmark sample")
    persistence_flags(s)
    common(s)
    s.set_defaults(func=cmd_persist)

    s = sub.add_parser("coords", help="circular or toroidal coordinates of selected classes")
    persistence_flags(s)
    s.add_argument("--barcode", default=None, help="barcode.json from a persist run")
    s.add_argument("--epsilon", type=_epsilon, default="auto")
    s.add_argument("--classes", type=_classes, default=None, help="e.g. 0,1")
    s.add_argument("--inner-product", choices=["dsmv", "dirichlet"], default="dsmv")
    s.add_argument("--knn", type=int, default=DEFAULT_KNN)
    s.add_argument("--bandwidth", type=float, default=None)
    s.add_argument("--mode", choices=["circular", "toroidal"], default="toroidal")
    s.add_argument("--sparse", action="store_true", help="extend to all points via the cover")
    common(s)
    s.set_defaults(func=cmd_coords)

    s = sub.add_parser("slidingwindow", help="sliding-window embedding of a CSV matrix")
    s.add_argument("--d", type=int, default=5)
    s.add_argument("--tau", type=int, default=4)
    s.add_argument("--orientation", choices=["rows", "columns"], default="rows")
    common(s)
    s.set_defaults(func=cmd_slidingwindow)

    s = sub.add_parser("correlate", help="Dirichlet correlation matrix of circle-valued maps")
    s.add_argument("--maps", required=True, help="CSV of circle values, one column per map")
    s.add_argument("--knn", type=int, default=DEFAULT_KNN)
    s.add_argument("--bandwidth", type=float, default=None)
    common(s)
    s.set_defaults(func=cmd_correlate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
