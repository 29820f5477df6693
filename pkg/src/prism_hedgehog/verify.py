"""Measure invariants of a configuration numerically and compare with declared ones."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import AccuracyError, BoundaryConditionError, ResolutionError
from .quadrature import QuadratureConfig, trapped_area
from .representative import Configuration, director, evaluate_array, special_points
from .topology import KinkTriple, SignTriple, VertexTopology

__all__ = [
    "VerificationReport",
    "BoundaryReport",
    "measure_edge_signs",
    "measure_kink_numbers",
    "measure_trapped_area",
    "check_tangent_bc",
    "verify",
    "KINK_SIGNS",
    "BC_THRESHOLD",
    "AREA_THRESHOLD",
]

# Orientation signs for (k_x, k_y, k_z) relative to the counter-clockwise
# unwrapped angle of the director along each boundary path.  Calibrated once on
# the case-1a spec with k = (1, 1, 1); see tests/test_verify.py.
KINK_SIGNS = (1, -1, -1)

BC_THRESHOLD = 1e-10
AREA_THRESHOLD = 1e-6 * math.pi / 2
_WINDING_THRESHOLD = 1e-6
_START_SAMPLES = 512
_MAX_SAMPLES = 1 << 20


def _chart_scalar(cfg, w) -> np.ndarray:
    """F or 1/F, whichever has modulus at most one.  ``cfg`` may also be a
    plain vectorised callable F(w)."""
    if isinstance(cfg, Configuration):
        jet = evaluate_array(cfg, w)
        N, D = jet.N, jet.D
    else:
        N, D = np.asarray(cfg(w), dtype=complex), np.ones_like(w)
    finite = np.abs(N) <= np.abs(D)
    num = np.where(finite, N, D)
    den = np.where(finite, D, N)
    return num / den


# boundary paths: w(tau) and the unit complex tracked along each
_PATHS = {
    "x": (lambda t: 1j * (1 - t), lambda n: n[..., 2] + 1j * n[..., 1]),
    "y": (lambda t: t + 0j, lambda n: n[..., 2] + 1j * n[..., 0]),
    "z": (lambda t: np.exp(0.5j * math.pi * t), lambda n: n[..., 0] + 1j * n[..., 1]),
}


def _path_parameters(cfg: Configuration, axis: str, reach: float = 0.05) -> list:
    """Path parameters of the projections of zeros and poles near one path."""
    zeros, poles = special_points(cfg)
    found = []
    for p in zeros + poles:
        if axis == "x" and abs(p.real) < reach:
            found.append(1.0 - p.imag)
        elif axis == "y" and abs(p.imag) < reach:
            found.append(p.real)
        elif axis == "z" and abs(abs(p) - 1.0) < reach and p != 0:
            found.append(cmath.phase(p) / (math.pi / 2))
    return found


def _initial_samples(cfg: Configuration, axis: str, start: int) -> np.ndarray:
    # a zero or pole on or near the path can turn the director within a tiny interval,
    # so sample geometrically down to ~1e-13 around each one
    tau = [np.linspace(0.0, 1.0, start + 1)]
    offsets = 2.0 ** -np.arange(3, 44)
    for t in _path_parameters(cfg, axis):
        tau.append(t + offsets)
        tau.append(t - offsets)
    tau = np.concatenate(tau)
    return np.unique(tau[(tau >= 0.0) & (tau <= 1.0)])


def _unwrapped_change(cfg: Configuration, axis: str, start: int = _START_SAMPLES) -> float:
    """Total continuous change of the tracked angle along one boundary path.

    Steps whose angle change exceeds pi/4 are bisected until none remain.
    """
    path, track = _PATHS[axis]
    tau = _initial_samples(cfg, axis, start)
    u = track(director(cfg, path(tau)))
    while True:
        step = np.angle(u[1:] / u[:-1])
        coarse = np.abs(step) > math.pi / 4
        if not np.any(coarse):
            break
        if len(tau) >= _MAX_SAMPLES:
            if np.max(np.abs(step)) > math.pi / 2:
                raise ResolutionError(f"angle step {np.max(np.abs(step)):.3g} on {axis}-path after refinement")
            break
        mids = (tau[:-1][coarse] + tau[1:][coarse]) / 2
        u_mid = track(director(cfg, path(mids)))
        tau = np.concatenate([tau, mids])
        u = np.concatenate([u, u_mid])
        order = np.argsort(tau, kind="stable")
        tau, u = tau[order], u[order]
    return float(np.sum(np.angle(u[1:] / u[:-1])))


def _kink(change: float, sign: int):
    """Kink number and rounding residual from a total angle change."""
    shortest = math.remainder(change, 2 * math.pi)
    turns = (change - shortest) / (2 * math.pi)
    k = round(turns)
    # endpoints sit a quarter turn apart, so the residual is pure sampling noise
    residual = abs(abs(shortest) - math.pi / 2) / (2 * math.pi)
    if residual > _WINDING_THRESHOLD:
        raise ResolutionError(f"endpoint angle change {shortest} is not a quarter turn")
    return sign * int(k), residual


@dataclass(frozen=True)
class BoundaryReport:
    real_interval: float
    imag_interval: float
    arc: float

    @property
    def max(self) -> float:
        return max(self.real_interval, self.imag_interval, self.arc)

    def ok(self, threshold: float = BC_THRESHOLD) -> bool:
        return self.max < threshold


def check_tangent_bc(cfg, samples: int = 2048) -> BoundaryReport:
    """Max residuals of the tangent conditions on the three boundary pieces,
    measured in whichever chart (F or 1/F) has modulus at most one.

    ``cfg`` is a Configuration or any vectorised callable F(w).
    """
    t = np.linspace(0.0, 1.0, samples + 1)
    real = np.max(np.abs(_chart_scalar(cfg, t + 0j).imag))
    imag = np.max(np.abs(_chart_scalar(cfg, 1j * t).real))
    arc = np.max(np.abs(np.abs(_chart_scalar(cfg, np.exp(0.5j * math.pi * t))) - 1.0))
    return BoundaryReport(float(real), float(imag), float(arc))


def measure_edge_signs(cfg: Configuration, threshold: float = BC_THRESHOLD) -> SignTriple:
    report = check_tangent_bc(cfg)
    if not report.ok(threshold):
        raise BoundaryConditionError(f"tangent boundary conditions violated: {report}")
    n = director(cfg, np.array([1.0 + 0j, 1j, 0j]))
    ex = 1 if n[0, 0] > 0 else -1
    ey = 1 if n[1, 1] > 0 else -1
    ez = 1 if n[2, 2] > 0 else -1
    return SignTriple(ex, ey, ez)


def _measure_kinks(cfg: Configuration):
    found = [_kink(_unwrapped_change(cfg, axis), sign) for axis, sign in zip("xyz", KINK_SIGNS)]
    return KinkTriple(*(k for k, _ in found)), max(r for _, r in found)


def measure_kink_numbers(cfg: Configuration) -> KinkTriple:
    """Windings of the director along the three faces through the origin,
    relative to the shortest quarter turn."""
    return _measure_kinks(cfg)[0]


def measure_trapped_area(
    cfg: Configuration, qc: Optional[QuadratureConfig] = None, threshold: float = AREA_THRESHOLD
):
    """Nearest odd m to trapped_area / (pi/2), and the residual in steradians."""
    est = trapped_area(cfg, qc)
    half = est.value / (math.pi / 2)
    m = 2 * math.floor(half / 2) + 1
    residual = abs(est.value - m * math.pi / 2)
    if residual > threshold:
        raise AccuracyError(
            f"trapped area {est.value!r} is {residual:.3g} from {m} pi/2", partial=est
        )
    return m, residual


@dataclass(frozen=True)
class VerificationReport:
    declared: VertexTopology
    measured_e: Optional[SignTriple]
    measured_k: Optional[KinkTriple]
    measured_m: Optional[int]
    residuals: Dict[str, float] = field(default_factory=dict)
    errors: Dict[str, str] = field(default_factory=dict)
    pass_: bool = False

    @property
    def passed(self) -> bool:
        return self.pass_

    @property
    def measured(self) -> Optional[VertexTopology]:
        if None in (self.measured_e, self.measured_k, self.measured_m):
            return None
        return VertexTopology(self.measured_e, self.measured_k, self.measured_m)

    def as_dict(self) -> dict:
        return {
            "declared": _topology_dict(self.declared),
            "measured": {
                "e": None if self.measured_e is None else list(self.measured_e),
                "k": None if self.measured_k is None else list(self.measured_k),
                "m": self.measured_m,
            },
            "residuals": dict(self.residuals),
            "errors": dict(self.errors),
            "pass": self.pass_,
        }


def _topology_dict(vt: VertexTopology) -> dict:
    return {"e": list(vt.e), "k": list(vt.k), "m": vt.m}


def verify(
    cfg: Configuration,
    declared: VertexTopology,
    qc: Optional[QuadratureConfig] = None,
    area_threshold: float = AREA_THRESHOLD,
    bc_threshold: float = BC_THRESHOLD,
) -> VerificationReport:
    """Measure (e, k, m) of ``cfg`` and compare with ``declared``.  Never raises
    for measurement failures; they are recorded in ``errors``."""
    errors = {}
    bc = check_tangent_bc(cfg)
    residuals = {"boundary": bc.max}
    e = k = m = None
    try:
        e = measure_edge_signs(cfg, bc_threshold)
    except BoundaryConditionError as exc:
        errors["edge_signs"] = str(exc)
    try:
        k, residuals["winding"] = _measure_kinks(cfg)
    except ResolutionError as exc:
        errors["kink_numbers"] = str(exc)
    try:
        m, residuals["area"] = measure_trapped_area(cfg, qc, threshold=math.inf)
        if residuals["area"] > area_threshold:
            errors["trapped_area"] = f"rounding residual {residuals['area']:.3g} above {area_threshold:.3g}"
    except AccuracyError as exc:
        errors["trapped_area"] = str(exc)
    ok = (
        not errors
        and e == declared.e
        and k == declared.k
        and m == declared.m
        and bc.max < bc_threshold
    )
    return VerificationReport(declared, e, k, m, residuals, errors, ok)
