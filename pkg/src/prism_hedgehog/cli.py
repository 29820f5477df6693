"""Command-line interface and file formats.

Exit codes:
  0  success
  1  usage error (malformed flags)
  2  invalid topology (not realizable, or wrong class)
  3  output path not writable
  4  verification failed, or bound chain not certified
  5  accuracy or evaluation failure

Configuration files are JSON:
  {"epsilon": 1, "n": 1, "real_factors": [[r, 1], ...],
   "imag_factors": [[s, -1], ...], "interior_factors": [[re, im, 1], ...],
   "rotations": 0, "conjugated": false,
   "glue": null | {"w0": [re, im], "eps": 0.05, "W": 1}}
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .bounds import bounds_report, lower_bound_new, lower_bound_old, upper_bound_formula
from .errors import (
    AccuracyError,
    ClassificationError,
    DensityInequalityError,
    DomainError,
    GeometryError,
    RealizabilityError,
    ResolutionError,
)
from .quadrature import PrismGeometry, QuadratureConfig, energy
from .representative import (
    Configuration,
    GlueData,
    RationalSpec,
    build_representative,
    director,
)
from .topology import (
    OCTANTS,
    VertexTopology,
    classify,
    omega_chi,
    realizability_violation,
    sweep_topologies,
    wrapping_numbers,
)
from .verify import AREA_THRESHOLD, verify

EXIT_OK, EXIT_USAGE, EXIT_TOPOLOGY, EXIT_IO, EXIT_VERIFY, EXIT_ACCURACY = range(6)

ATLAS_HEADER = (
    ["e_x", "e_y", "e_z", "k_x", "k_y", "k_z", "m", "classification", "boundary"]
    + ["w_" + str(s).replace(",", "") for s in OCTANTS]
    + ["sum_abs_w", "lower_new", "lower_old", "upper_formula", "measured_energy"]
)
FIELD_HEADER = ["x", "y", "z", "n_x", "n_y", "n_z"]

# options whose values may begin with '-'
_VALUE_OPTIONS = {"--e", "--k", "--m", "--omega-halfpi", "--m-window", "--geometry", "--slice"}


class UsageError(Exception):
    pass


class _IOFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# Flag parsing


def parse_signs(text: str):
    tokens = text.split(",")
    if len(tokens) != 3 or any(t not in ("+", "-", "+1", "-1", "1") for t in tokens):
        raise UsageError(f"expected three signs like '+,-,+', got {text!r}")
    return tuple(-1 if t.startswith("-") else 1 for t in tokens)


def parse_ints(text: str, count: int = 3):
    try:
        values = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"expected {count} comma-separated integers, got {text!r}") from None
    if len(values) != count:
        raise UsageError(f"expected {count} comma-separated integers, got {text!r}")
    return values


def parse_geometry(text: str) -> PrismGeometry:
    try:
        lengths = [float(t) for t in text.split(",")]
        if len(lengths) != 3:
            raise ValueError
        return PrismGeometry(*lengths)
    except ValueError:
        raise UsageError(f"expected three positive lengths like '1,1,1', got {text!r}") from None


def parse_window(text: str):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"expected an m window like '-17..17', got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty m window {text!r}")
    return lo, hi


def topology_from_args(args) -> VertexTopology:
    m = args.m
    if m is None:
        raise UsageError("one of --m / --omega-halfpi is required")
    return VertexTopology(parse_signs(args.e), parse_ints(args.k), m)


def _add_topology_flags(p):
    p.add_argument("--e", required=True, help="edge signs, e.g. +,+,+")
    p.add_argument("--k", required=True, help="kink numbers, e.g. 1,1,0")
    p.add_argument("--m", "--omega-halfpi", dest="m", type=int, help="trapped area in units of pi/2 (odd)")


def _add_quadrature_flags(p):
    p.add_argument("--rel-tol", type=float, default=QuadratureConfig.rel_tol)
    p.add_argument("--abs-tol", type=float, default=QuadratureConfig.abs_tol)


def _qc(args) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _threads() -> int:
    value = os.environ.get("PRISM_HEDGEHOG_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _join_values(argv):
    """Rewrite '--k -1,0,0' as '--k=-1,0,0' so argparse does not take the
    value for an option."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


# --------------------------------------------------------------------------
# Serialization


def config_to_dict(cfg: Configuration) -> dict:
    rs = cfg.base
    return {
        "epsilon": rs.epsilon,
        "n": rs.n,
        "real_factors": [[r, s] for r, s in rs.real_factors],
        "imag_factors": [[r, s] for r, s in rs.imag_factors],
        "interior_factors": [[t.real, t.imag, s] for t, s in rs.interior_factors],
        "rotations": cfg.rotations,
        "conjugated": cfg.conjugated,
        "glue": None
        if cfg.glue is None
        else {"w0": [cfg.glue.w0.real, cfg.glue.w0.imag], "eps": cfg.glue.eps, "W": cfg.glue.W},
    }


def config_from_dict(data: dict) -> Configuration:
    rs = RationalSpec(
        epsilon=int(data["epsilon"]),
        n=int(data["n"]),
        real_factors=tuple((float(r), int(s)) for r, s in data.get("real_factors", [])),
        imag_factors=tuple((float(r), int(s)) for r, s in data.get("imag_factors", [])),
        interior_factors=tuple(
            (complex(float(re), float(im)), int(s)) for re, im, s in data.get("interior_factors", [])
        ),
    )
    glue = data.get("glue")
    if glue is not None:
        glue = GlueData(complex(*glue["w0"]), float(glue["eps"]), int(glue["W"]))
    return Configuration(rs, int(data.get("rotations", 0)), bool(data.get("conjugated", False)), glue)


def dumps_config(cfg: Configuration) -> str:
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"


def load_config(path) -> Configuration:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def _write_text(path, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


# --------------------------------------------------------------------------
# Commands


def classification_dict(vt: VertexTopology) -> dict:
    c = classify(vt)
    w = wrapping_numbers(vt)
    return {
        "e": list(vt.e),
        "k": list(vt.k),
        "m": vt.m,
        "realizable": True,
        "classification": c.kind.value,
        "boundary": c.boundary,
        "w": w.as_dict(),
        "sum_abs_w": w.sum_abs,
        "m_minus": omega_chi(vt.e, vt.k, -1),
        "m_plus": omega_chi(vt.e, vt.k, 1),
    }


def cmd_classify(args) -> int:
    vt = topology_from_args(args)
    reason = realizability_violation(vt)
    if reason is not None:
        if args.json:
            print(json.dumps({"e": list(vt.e), "k": list(vt.k), "m": vt.m, "realizable": False, "reason": reason}))
        print(f"not realizable: {reason}", file=sys.stderr)
        return EXIT_TOPOLOGY
    info = classification_dict(vt)
    if args.json:
        print(json.dumps(info, indent=2))
        return EXIT_OK
    print(f"topology: {vt}")
    print(f"classification: {info['classification']}" + (" (boundary)" if info["boundary"] else ""))
    print("wrapping numbers: " + "  ".join(f"({s}):{v:+d}" for s, v in info["w"].items()))
    print(f"sum_abs_w: {info['sum_abs_w']}")
    print(f"thresholds: conformal iff m <= {-info['m_minus']}, anticonformal iff m >= {info['m_plus']}")
    return EXIT_OK


def atlas_row(vt: VertexTopology, geom: PrismGeometry, measured=None) -> dict:
    c = classify(vt)
    w = wrapping_numbers(vt)
    row = {
        "e_x": vt.e[0], "e_y": vt.e[1], "e_z": vt.e[2],
        "k_x": vt.k[0], "k_y": vt.k[1], "k_z": vt.k[2],
        "m": vt.m,
        "classification": c.kind.value,
        "boundary": c.boundary,
    }
    for s, v in w.items():
        row["w_" + str(s).replace(",", "")] = v
    row.update(
        sum_abs_w=w.sum_abs,
        lower_new=lower_bound_new(vt, geom),
        lower_old=lower_bound_old(vt, geom),
        upper_formula=upper_bound_formula(vt, geom),
        measured_energy=measured,
    )
    return row


def _measure_energy(vt, geom, qc):
    return energy(build_representative(vt, qc=qc), geom, qc).value


def atlas_text(kmax, window, geom, fmt="csv", measure=False, qc=None) -> str:
    """Atlas as text; rows in canonical (e, k, m) order."""
    qc = qc or QuadratureConfig()
    vts = list(sweep_topologies(kmax, *window))
    measured = [None] * len(vts)
    if measure:
        with ThreadPoolExecutor(_threads()) as pool:
            measured = list(pool.map(lambda vt: _measure_energy(vt, geom, qc), vts))
    rows = [atlas_row(vt, geom, e) for vt, e in zip(vts, measured)]
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ATLAS_HEADER)
    for row in rows:
        writer.writerow([_fmt(row[h]) for h in ATLAS_HEADER])
    return buf.getvalue()


def cmd_atlas(args) -> int:
    geom = parse_geometry(args.geometry)
    text = atlas_text(args.kmax, parse_window(args.m_window), geom, args.format, args.measure, _qc(args))
    _write_text(args.out, text)
    return EXIT_OK


def cmd_build(args) -> int:
    vt = topology_from_args(args)
    cfg = build_representative(vt, qc=_qc(args))
    _write_text(args.out, dumps_config(cfg))
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    vt = topology_from_args(args)
    report = verify(cfg, vt, _qc(args), area_threshold=args.tol)
    print(json.dumps(report.as_dict(), indent=2))
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_bounds(args) -> int:
    vt = topology_from_args(args)
    report = bounds_report(vt, parse_geometry(args.geometry), _qc(args), args.measure)
    print(json.dumps(report.as_dict(), indent=2))
    return EXIT_OK if report.chain_ok else EXIT_VERIFY


def _field_points(geom: PrismGeometry, grid: int, slice_: str) -> np.ndarray:
    """Cell-centred sample points of the prism surface or of a plane z = c."""
    t = (np.arange(grid) + 0.5) / grid
    L = np.array(geom.lengths)
    if slice_ == "surface":
        blocks = []
        u, v = np.meshgrid(t, t, indexing="ij")
        u, v = u.ravel(), v.ravel()
        for axis in range(3):
            a, b = (axis + 1) % 3, (axis + 2) % 3
            for level in (0.0, 1.0):
                p = np.empty((len(u), 3))
                p[:, axis] = level * L[axis]
                p[:, a] = u * L[a]
                p[:, b] = v * L[b]
                blocks.append(p)
        return np.concatenate(blocks)
    if slice_.startswith("z="):
        try:
            c = float(slice_[2:])
        except ValueError:
            raise UsageError(f"bad slice {slice_!r}") from None
        if not 0.0 <= c <= geom.Lz:
            raise UsageError(f"slice z={c} lies outside [0, {geom.Lz}]")
        x, y = np.meshgrid(t * geom.Lx, t * geom.Ly, indexing="ij")
        return np.stack([x.ravel(), y.ravel(), np.full(x.size, c)], axis=1)
    raise UsageError(f"--slice must be 'surface' or 'z=<value>', got {slice_!r}")


def field_samples(cfg: Configuration, geom: PrismGeometry, points: np.ndarray) -> np.ndarray:
    """Director at prism points: reflect into the origin octant, then use
    radial constancy.  Vertices themselves are excluded by the caller."""
    L = np.array(geom.lengths)
    q = np.minimum(points, L - points)
    r = np.linalg.norm(q, axis=1)
    if np.any(r == 0):
        raise DomainError("the director is undefined at the vertices")
    w = (q[:, 0] + 1j * q[:, 1]) / (r + q[:, 2])
    # clamp rounding just outside the quarter disk
    w = np.where(np.abs(w) > 1, w / np.abs(w), w)
    w = np.maximum(w.real, 0.0) + 1j * np.maximum(w.imag, 0.0)
    return director(cfg, w)


def cmd_field(args) -> int:
    cfg = load_config(args.config)
    geom = parse_geometry(args.geometry)
    if args.grid < 1:
        raise UsageError("--grid must be positive")
    points = _field_points(geom, args.grid, args.slice)
    n = field_samples(cfg, geom, points)
    if not np.all(np.isfinite(n)) or np.max(np.abs(np.linalg.norm(n, axis=1) - 1)) > 1e-12:
        raise AccuracyError("director samples are not unit vectors")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELD_HEADER)
    for p, d in zip(points, n):
        writer.writerow([repr(float(x)) for x in (*p, *d)])
    _write_text(args.out, buf.getvalue())
    return EXIT_OK


# --------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="prism-hedgehog",
        description="Topologies, representatives and energy bounds for nematic "
        "director fields in a rectangular prism.",
        epilog="exit codes: 0 success, 1 usage, 2 invalid topology, 3 unwritable output, "
        "4 verification failed or chain not certified, 5 accuracy/evaluation failure.  "
        "Values starting with '-' may follow their flag directly, e.g. --k -1,0,0.  "
        "PRISM_HEDGEHOG_THREADS caps worker threads for 'atlas --measure'.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="classify a vertex topology")
    _add_topology_flags(p)
    p.add_argument("--json", action="store_true", help="print a JSON object")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("atlas", help="tabulate every realizable topology in a range")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--m-window", required=True, help="inclusive range a..b")
    p.add_argument("--geometry", default="1,1,1", help="Lx,Ly,Lz")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--measure", action="store_true", help="also measure representative energies")
    _add_quadrature_flags(p)
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("build", help="write the representative configuration as JSON")
    _add_topology_flags(p)
    p.add_argument("--out", required=True)
    _add_quadrature_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="measure a configuration's invariants")
    p.add_argument("config")
    _add_topology_flags(p)
    p.add_argument("--tol", type=float, default=AREA_THRESHOLD, help="trapped-area rounding threshold (sr)")
    _add_quadrature_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="energy bounds, optionally certified by measurement")
    _add_topology_flags(p)
    p.add_argument("--geometry", default="1,1,1", help="Lx,Ly,Lz")
    p.add_argument("--measure", action="store_true")
    _add_quadrature_flags(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("field", help="export director samples as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--slice", default="surface", help="'surface' or 'z=<value>'")
    p.add_argument("--geometry", default="1,1,1", help="Lx,Ly,Lz")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_field)
    return parser


def main(argv=None) -> int:
    argv = _join_values(sys.argv[1:] if argv is None else list(argv))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RealizabilityError, ClassificationError) as exc:
        print(f"invalid topology: {exc}", file=sys.stderr)
        return EXIT_TOPOLOGY
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (AccuracyError, ResolutionError, GeometryError, DomainError, DensityInequalityError) as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        if args.command in ("verify", "field"):
            print(f"error: cannot read configuration: {exc}", file=sys.stderr)
            return EXIT_ACCURACY if args.command == "field" else EXIT_USAGE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
