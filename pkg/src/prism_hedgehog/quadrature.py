"""Adaptive quadrature of area and energy densities over the quarter disk.

Integrals are assembled from rectangular parameter pieces (polar cells over Q,
polar cells about the glue centre, or flat faces of the prism octant), each
integrated with a globally adaptive tensor Gauss-Legendre rule.  A glued
configuration is split exactly as

    int_Q F = int_Q f - int_{D_2eps} f + int_{D_eps} F + int_{annulus} F

so no cell ever straddles one of the glue circles.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import AccuracyError, DensityInequalityError, DomainError
from .representative import (
    Configuration,
    densities,
    evaluate_array,
    in_quarter_disk,
    special_points,
)

__all__ = [
    "PrismGeometry",
    "QuadratureConfig",
    "DensitySample",
    "Estimate",
    "density_sample",
    "trapped_area",
    "unoriented_area",
    "energy",
    "boundary_radius",
    "inverse_stereographic",
    "stereographic",
    "DENSITY_CHECKS",
]


@dataclass(frozen=True)
class PrismGeometry:
    Lx: float = 1.0
    Ly: float = 1.0
    Lz: float = 1.0

    def __post_init__(self):
        for name in ("Lx", "Ly", "Lz"):
            value = float(getattr(self, name))
            if not value > 0 or not math.isfinite(value):
                raise ValueError(f"{name} must be a positive length, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def lengths(self):
        return (self.Lx, self.Ly, self.Lz)

    @property
    def L(self) -> float:
        return math.sqrt(self.Lx ** 2 + self.Ly ** 2 + self.Lz ** 2)

    @property
    def Lmin(self) -> float:
        return min(self.lengths)

    @property
    def canonical_order(self) -> bool:
        """True if Lx >= Ly >= Lz."""
        return self.Lx >= self.Ly >= self.Lz

    def scaled(self, factor: float) -> "PrismGeometry":
        return PrismGeometry(self.Lx * factor, self.Ly * factor, self.Lz * factor)


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    # adaptive bisections per cell, not counting forced special-point splits
    max_depth: int = 48
    special_point_padding: float = 4.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 4:
            raise ValueError("max_depth must be at least 4")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


class DensitySample(NamedTuple):
    oriented: float
    unoriented: float


class Estimate(NamedTuple):
    value: float
    error: float
    cells: int
    evaluations: int

    def __float__(self):
        return float(self.value)


# running tally of every density sample checked for |oriented| <= unoriented
DENSITY_CHECKS = {"samples": 0, "violations": 0}


_CHUNK = 1 << 12


def _checked_densities(cfg: Configuration, w: np.ndarray):
    # chunks keep the working arrays cache-sized
    parts = [densities(evaluate_array(cfg, w[i : i + _CHUNK], check_domain=False)) for i in range(0, len(w), _CHUNK)]
    oriented = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0)
    unoriented = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0)
    bad = np.abs(oriented) > unoriented
    DENSITY_CHECKS["samples"] += oriented.size
    if np.any(bad):
        DENSITY_CHECKS["violations"] += int(bad.sum())
        raise DensityInequalityError(
            f"|oriented| > unoriented at {int(bad.sum())} samples, e.g. w = {w[bad][0]}"
        )
    return oriented, unoriented


def density_sample(cfg: Configuration, w: complex) -> DensitySample:
    o, u = _checked_densities(cfg, np.array([complex(w)]))
    return DensitySample(float(o[0]), float(u[0]))


# --------------------------------------------------------------------------
# Stereographic geometry


def inverse_stereographic(w):
    """Unit vector(s) (2 Re w, 2 Im w, 1 - |w|^2) / (1 + |w|^2); last axis is xyz."""
    w = np.asarray(w, dtype=complex)
    a2 = np.abs(w) ** 2
    out = np.stack([2 * w.real, 2 * w.imag, 1 - a2], axis=-1)
    return out / (1 + a2)[..., None]


def stereographic(n):
    """(n_x + i n_y) / (1 + n_z); the south pole has no image."""
    n = np.asarray(n, dtype=float)
    if np.any(n[..., 2] <= -1.0):
        raise DomainError("stereographic projection undefined at n = -z")
    w = (n[..., 0] + 1j * n[..., 1]) / (1 + n[..., 2])
    return complex(w) if w.ndim == 0 else w


def boundary_radius(w, geom: PrismGeometry):
    """Distance from the origin to the outer boundary of the prism octant along
    the direction with stereographic coordinate ``w``."""
    n = inverse_stereographic(w)
    half = np.array(geom.lengths) / 2
    with np.errstate(divide="ignore"):
        ratios = np.where(n > 0, half / np.where(n > 0, n, 1.0), np.inf)
    r = ratios.min(axis=-1)
    return float(r) if np.ndim(r) == 0 else r


# --------------------------------------------------------------------------
# Adaptive tensor Gauss-Legendre


_X7, _W7 = np.polynomial.legendre.leggauss(7)
_X3, _W3 = np.polynomial.legendre.leggauss(3)
_FORCED_DIAMETER = 1.0 / 64


@dataclass
class _Piece:
    """Integrand over a rectangle of parameters (u, v).

    ``func(u, v)`` returns integrand values; ``to_w(u, v)`` maps to the quarter
    disk for special-point refinement.
    """

    func: Callable
    to_w: Callable
    u_breaks: Sequence[float]
    v_breaks: Sequence[float]


def _cell_nodes(u0, u1, v0, v1):
    """Node coordinates (M, 91): 7x7 block, then 3x7, then 7x3."""
    cu, hu = (u0 + u1) / 2, (u1 - u0) / 2
    cv, hv = (v0 + v1) / 2, (v1 - v0) / 2
    u7 = cu[:, None] + hu[:, None] * _X7
    v7 = cv[:, None] + hv[:, None] * _X7
    u3 = cu[:, None] + hu[:, None] * _X3
    v3 = cv[:, None] + hv[:, None] * _X3
    U = np.concatenate(
        [
            np.repeat(u7, 7, axis=1),
            np.repeat(u3, 7, axis=1),
            np.repeat(u7, 3, axis=1),
        ],
        axis=1,
    )
    V = np.concatenate([np.tile(v7, 7), np.tile(v7, 3), np.tile(v3, 7)], axis=1)
    return U, V, hu * hv


def _cell_rules(g, jac):
    g77 = g[:, :49].reshape(-1, 7, 7)
    g37 = g[:, 49:70].reshape(-1, 3, 7)
    g73 = g[:, 70:].reshape(-1, 7, 3)
    i77 = np.einsum("i,j,mij->m", _W7, _W7, g77) * jac
    i37 = np.einsum("i,j,mij->m", _W3, _W7, g37) * jac
    i73 = np.einsum("i,j,mij->m", _W7, _W3, g73) * jac
    return i77, np.abs(i77 - i37), np.abs(i77 - i73)


class _Cells:
    def __init__(self):
        self.pid = np.zeros(0, dtype=int)
        self.box = np.zeros((0, 4))
        self.depth = np.zeros(0, dtype=int)

    def add(self, pid, box, depth):
        self.pid = np.concatenate([self.pid, pid])
        self.box = np.concatenate([self.box, box])
        self.depth = np.concatenate([self.depth, depth])


def _w_diameter(piece: _Piece, box):
    u0, u1, v0, v1 = box.T
    corners = [piece.to_w(u, v) for u, v in ((u0, v0), (u1, v0), (u0, v1), (u1, v1))]
    corners.append(piece.to_w((u0 + u1) / 2, (v0 + v1) / 2))
    diam = np.zeros(len(box))
    for a in range(len(corners)):
        for b in range(a + 1, len(corners)):
            diam = np.maximum(diam, np.abs(corners[a] - corners[b]))
    return corners[-1], diam


def _split(box, axis_u):
    u0, u1, v0, v1 = box.T
    um, vm = (u0 + u1) / 2, (v0 + v1) / 2
    first = np.where(axis_u[:, None], np.stack([u0, um, v0, v1], 1), np.stack([u0, u1, v0, vm], 1))
    second = np.where(axis_u[:, None], np.stack([um, u1, v0, v1], 1), np.stack([u0, u1, vm, v1], 1))
    return np.concatenate([first, second])


def _initial_cells(pieces: List[_Piece], specials, qc: QuadratureConfig):
    """Initial grid, split around each special point until cells within
    ``padding`` diameters of it are no wider than its target diameter."""
    boxes, pids = [], []
    for pid, piece in enumerate(pieces):
        for ua, ub in zip(piece.u_breaks[:-1], piece.u_breaks[1:]):
            for va, vb in zip(piece.v_breaks[:-1], piece.v_breaks[1:]):
                boxes.append((ua, ub, va, vb))
                pids.append(pid)
    box = np.array(boxes, dtype=float)
    pid = np.array(pids, dtype=int)
    depth = np.zeros(len(box), dtype=int)
    if len(specials) == 0:
        return pid, box, depth
    points = np.array([p for p, _ in specials], dtype=complex)
    targets = np.array([t for _, t in specials], dtype=float)
    for _ in range(80):
        near = np.zeros(len(box), dtype=bool)
        for p_id, piece in enumerate(pieces):
            sel = pid == p_id
            if not np.any(sel):
                continue
            centre, diam = _w_diameter(piece, box[sel])
            dist = np.abs(centre[:, None] - points[None, :])
            hit = (dist < qc.special_point_padding * diam[:, None]) & (diam[:, None] > targets[None, :])
            near[sel] = hit.any(axis=1)
        if not np.any(near):
            break
        halves = _split(_split(box[near], np.ones(near.sum(), bool)), np.zeros(2 * near.sum(), bool))
        pid = np.concatenate([pid[~near], np.tile(pid[near], 4)])
        depth = np.concatenate([depth[~near], np.tile(depth[near], 4)])
        box = np.concatenate([box[~near], halves])
    return pid, box, depth


def _evaluate_cells(pieces, pid, box):
    U, V, jac = _cell_nodes(*box.T)
    g = np.empty(U.shape)
    for p_id, piece in enumerate(pieces):
        sel = pid == p_id
        if np.any(sel):
            g[sel] = piece.func(U[sel], V[sel])
    return _cell_rules(g, jac)


def _integrate(pieces: List[_Piece], qc: QuadratureConfig, specials=()) -> Estimate:
    pid, box, depth = _initial_cells(pieces, specials, qc)
    val, eu, ev = _evaluate_cells(pieces, pid, box)
    evaluations = 91 * len(box)
    for _ in range(10_000):
        err = eu + ev
        total = math.fsum(val)
        total_err = math.fsum(err)
        tol = qc.tolerance(total)
        if total_err <= tol:
            break
        order = np.argsort(-err, kind="stable")
        remaining = total_err - np.cumsum(err[order])
        count = int(np.searchsorted(-remaining, -tol / 2)) + 1
        chosen = order[:count]
        chosen = chosen[depth[chosen] < qc.max_depth]
        if len(chosen) == 0:
            worst = order[0]
            where = pieces[pid[worst]].to_w(
                (box[worst, 0] + box[worst, 1]) / 2, (box[worst, 2] + box[worst, 3]) / 2
            )
            raise AccuracyError(
                f"quadrature did not converge within max_depth={qc.max_depth} "
                f"(estimate {total!r}, error {total_err:.3g}, tolerance {tol:.3g}; "
                f"largest cell error {err[worst]:.3g} near w = {complex(where):.6g})",
                partial=Estimate(total, total_err, len(box), evaluations),
            )
        keep = np.ones(len(box), dtype=bool)
        keep[chosen] = False
        new_box = _split(box[chosen], eu[chosen] >= ev[chosen])
        new_pid = np.tile(pid[chosen], 2)
        new_depth = np.tile(depth[chosen] + 1, 2)
        nval, neu, nev = _evaluate_cells(pieces, new_pid, new_box)
        evaluations += 91 * len(new_box)
        pid = np.concatenate([pid[keep], new_pid])
        box = np.concatenate([box[keep], new_box])
        depth = np.concatenate([depth[keep], new_depth])
        val = np.concatenate([val[keep], nval])
        eu = np.concatenate([eu[keep], neu])
        ev = np.concatenate([ev[keep], nev])
    else:
        raise AccuracyError("quadrature iteration limit reached", partial=Estimate(total, total_err, len(box), evaluations))
    # canonical order for a reproducible compensated sum
    order = np.lexsort((box[:, 2], box[:, 0], pid))
    return Estimate(math.fsum(val[order]), total_err, len(box), evaluations)


# --------------------------------------------------------------------------
# Pieces


def _polar_q(weight):
    def func(u, v):
        return u * weight(u * np.exp(1j * v))

    return _Piece(
        func,
        lambda u, v: u * np.exp(1j * v),
        np.linspace(0.0, 1.0, 9),
        np.linspace(0.0, math.pi / 2, 9),
    )


def _polar_disk(w0, r0, r1, weight, graded=False):
    if graded:
        # glued disk density peaks near |w - w0| ~ eps^2
        breaks = [0.0]
        radius = r1
        while radius > r1 * r1 / 64 and radius > 1e-12:
            breaks.append(radius)
            radius /= 2
        breaks = sorted(set(breaks))
    else:
        breaks = [r0, r1]

    def to_w(u, v):
        return w0 + u * np.exp(1j * v)

    return _Piece(
        lambda u, v: u * weight(to_w(u, v)),
        to_w,
        breaks,
        np.linspace(0.0, 2 * math.pi, 9),
    )


def _glue_pieces(cfg: Configuration, weight_for):
    g = cfg.glue
    plain = cfg.without_glue()
    return [
        _polar_disk(g.w0, 0.0, 2 * g.eps, lambda w: -weight_for(plain, w)),
        _polar_disk(g.w0, 0.0, g.eps, lambda w: weight_for(cfg, w), graded=True),
        _polar_disk(g.w0, g.eps, 2 * g.eps, lambda w: weight_for(cfg, w)),
    ]


def _feature_scale(cfg: Configuration, p: complex, zero: bool) -> float:
    """Radius about a zero (pole) of the base inside which |F| stays below
    (above) one, probed along rays into the quarter disk."""
    radii = 2.0 ** -np.arange(2, 52)
    inward = (0.5 + 0.5j) - p
    inward = inward / abs(inward) if abs(inward) > 0 else 1.0
    scale = radii[0]
    for turn in (-0.6, -0.3, 0.0, 0.3, 0.6):
        w = p + radii * inward * cmath.exp(1j * turn)
        w = w[in_quarter_disk(w)]
        if len(w) == 0:
            continue
        N, D = evaluate_array(cfg, w, check_domain=False)[:2]
        inside = np.abs(N) <= np.abs(D) if zero else np.abs(N) >= np.abs(D)
        # radii run from large to small; keep the largest radius below which
        # every probe is inside
        outside = np.flatnonzero(~inside)
        if len(outside):
            scale = min(scale, radii[outside[-1] + 1] if outside[-1] + 1 < len(radii) else radii[-1])
    return float(scale)


def _specials(cfg: Configuration):
    """Zeros and poles of the base with the cell diameter to refine them to."""
    plain = replace(cfg, glue=None, conjugated=False)
    zeros, poles = special_points(plain)
    out = []
    for points, zero in ((zeros, True), (poles, False)):
        for p in points:
            out.append((p, min(_FORCED_DIAMETER, 2 * _feature_scale(plain, p, zero))))
    return out


def _area(cfg: Configuration, qc: Optional[QuadratureConfig], which: int) -> Estimate:
    qc = qc or QuadratureConfig()

    def weight_for(c, w):
        shape = w.shape
        return _checked_densities(c, w.ravel())[which].reshape(shape)

    pieces = [_polar_q(lambda w: weight_for(cfg.without_glue(), w))]
    if cfg.glue is not None:
        pieces += _glue_pieces(cfg, weight_for)
    return _integrate(pieces, qc, _specials(cfg))


def trapped_area(cfg: Configuration, qc: Optional[QuadratureConfig] = None) -> Estimate:
    """Signed spherical area (steradians) swept by the field over Q."""
    return _area(cfg, qc, 0)


def unoriented_area(cfg: Configuration, qc: Optional[QuadratureConfig] = None) -> Estimate:
    """Unsigned spherical area (steradians), at least |trapped_area|."""
    return _area(cfg, qc, 1)


def _face_pieces(cfg: Configuration, geom: PrismGeometry):
    """The three outer faces of the octant, parametrised by flat coordinates.

    On the face x_j = L_j / 2 the energy integrand becomes
    4 dens(w) (1 + |w|^2)^2 c / |p|^2 with c = L_j / 2, which is smooth.
    """
    hx, hy, hz = (L / 2 for L in geom.lengths)

    def make(point):
        def to_w(u, v):
            x, y, z = point(u, v)
            r = np.sqrt(x * x + y * y + z * z)
            return (x + 1j * y) / (r + z)

        def func(u, v, c):
            x, y, z = point(u, v)
            r2 = x * x + y * y + z * z
            w = (x + 1j * y) / (np.sqrt(r2) + z)
            shape = w.shape
            dens = _checked_densities(cfg, w.ravel())[1].reshape(shape)
            return 4 * dens * (1 + np.abs(w) ** 2) ** 2 * c / r2

        return to_w, func

    faces = []
    for point, c, ub, vb in (
        (lambda u, v: (u, v, np.full_like(u, hz)), hz, hx, hy),
        (lambda u, v: (np.full_like(u, hx), u, v), hx, hy, hz),
        (lambda u, v: (v, np.full_like(u, hy), u), hy, hz, hx),
    ):
        to_w, func = make(point)
        faces.append(
            _Piece(
                (lambda f, c: lambda u, v: f(u, v, c))(func, c),
                to_w,
                np.linspace(0.0, ub, 5),
                np.linspace(0.0, vb, 5),
            )
        )
    return faces


def energy(
    cfg: Configuration, geom: PrismGeometry, qc: Optional[QuadratureConfig] = None
) -> Estimate:
    """One-constant (K = 1) energy of the reflection-symmetric, radially constant
    field on the whole prism: 16 int_Q |r(w)| dens_unoriented(w) d^2w."""
    qc = qc or QuadratureConfig()
    if not geom.canonical_order:
        warnings.warn("edge lengths not ordered Lx >= Ly >= Lz; bounds use Lmin", stacklevel=2)
    pieces = _face_pieces(cfg.without_glue(), geom)
    if cfg.glue is not None:

        def weight_for(c, w):
            shape = w.shape
            dens = _checked_densities(c, w.ravel())[1].reshape(shape)
            return 16 * boundary_radius(w, geom) * dens

        pieces += _glue_pieces(cfg, weight_for)
    return _integrate(pieces, qc, _specials(cfg))
