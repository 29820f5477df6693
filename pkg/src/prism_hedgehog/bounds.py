"""Lower and upper energy bounds, and a certificate chain against measured energies.

Energies use K = 1 and the user's length units.  The minimum edge length plays
the role of the shortest side wherever the bounds need it, so the input need
not be ordered.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .quadrature import PrismGeometry, QuadratureConfig, energy, trapped_area, unoriented_area
from .representative import build_representative
from .topology import (
    Classification,
    Kind,
    VertexTopology,
    classify,
    omega_chi,
    wrapping_numbers,
)

__all__ = [
    "BoundsReport",
    "lower_bound_new",
    "lower_bound_old",
    "upper_bound_formula",
    "bound_ratio",
    "bounds_report",
]


def lower_bound_new(vt: VertexTopology, geom: PrismGeometry) -> float:
    """4 pi Lmin sum_sigma |w_sigma|."""
    return 4 * math.pi * geom.Lmin * wrapping_numbers(vt).sum_abs


def lower_bound_old(vt: VertexTopology, geom: PrismGeometry) -> float:
    """8 Lmin |Omega| = 4 pi Lmin |m|."""
    wrapping_numbers(vt)  # realizability check
    return 4 * math.pi * geom.Lmin * abs(vt.m)


def upper_bound_formula(vt: VertexTopology, geom: PrismGeometry) -> float:
    """8 L |Omega| for (anti)conformal topologies, 36 pi L sum |w| otherwise."""
    sum_abs = wrapping_numbers(vt).sum_abs
    if classify(vt).kind is Kind.NONCONFORMAL:
        return 36 * math.pi * geom.L * sum_abs
    return 4 * math.pi * geom.L * abs(vt.m)


def bound_ratio(vt: VertexTopology, geom: PrismGeometry) -> float:
    """upper / lower, computed from the exact integer ratio times L / Lmin.

    This is L / Lmin for (anti)conformal topologies and 9 L / Lmin otherwise.
    """
    sum_abs = wrapping_numbers(vt).sum_abs
    if classify(vt).kind is Kind.NONCONFORMAL:
        exact = Fraction(9)
    else:
        exact = Fraction(abs(vt.m), sum_abs)
    return float(exact) * (geom.L / geom.Lmin)


@dataclass
class BoundsReport:
    topology: VertexTopology
    classification: Classification
    sum_abs_w: int
    lower_new: float
    lower_old: float
    upper_formula: float
    ratio: float
    measured_energy: Optional[float] = None
    measured_unoriented: Optional[float] = None
    measured_trapped: Optional[float] = None
    glue_W: int = 0
    chain: List[dict] = field(default_factory=list)
    chain_ok: bool = True
    warnings: List[str] = field(default_factory=list)
    error: Optional[str] = None

    def as_dict(self) -> dict:
        vt = self.topology
        return {
            "topology": {"e": list(vt.e), "k": list(vt.k), "m": vt.m},
            "classification": self.classification.kind.value,
            "boundary": self.classification.boundary,
            "sum_abs_w": self.sum_abs_w,
            "lower_new": self.lower_new,
            "lower_old": self.lower_old,
            "upper_formula": self.upper_formula,
            "ratio": self.ratio,
            "measured_energy": self.measured_energy,
            "measured_unoriented": self.measured_unoriented,
            "measured_trapped": self.measured_trapped,
            "glue_W": self.glue_W,
            "chain": self.chain,
            "chain_ok": self.chain_ok,
            "warnings": self.warnings,
            "error": self.error,
        }


def _link(report: BoundsReport, label: str, lhs: float, rhs: float, qc: QuadratureConfig):
    tol = max(qc.abs_tol, 10 * qc.rel_tol * max(abs(lhs), abs(rhs)))
    ok = lhs <= rhs + tol
    report.chain.append({"check": label, "lhs": lhs, "rhs": rhs, "tol": tol, "ok": ok})
    report.chain_ok = report.chain_ok and ok


def bounds_report(
    vt: VertexTopology,
    geom: PrismGeometry,
    qc: Optional[QuadratureConfig] = None,
    with_measurement: bool = False,
) -> BoundsReport:
    """Bound formulas for ``vt``, optionally certified against the energy of the
    class-appropriate representative.

    Measured energies are energies of one particular configuration, never
    claimed to be the infimum.  Build and quadrature errors propagate; the
    report built so far is attached to the exception as ``partial_report``.
    """
    qc = qc or QuadratureConfig()
    w = wrapping_numbers(vt)
    report = BoundsReport(
        topology=vt,
        classification=classify(vt),
        sum_abs_w=w.sum_abs,
        lower_new=lower_bound_new(vt, geom),
        lower_old=lower_bound_old(vt, geom),
        upper_formula=upper_bound_formula(vt, geom),
        ratio=bound_ratio(vt, geom),
    )
    if not geom.canonical_order:
        report.warnings.append("edge lengths not ordered Lx >= Ly >= Lz; Lmin used as the short side")
    if not with_measurement:
        return report
    try:
        cfg = build_representative(vt, qc=qc)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            E = energy(cfg, geom, qc).value
        A = unoriented_area(cfg, qc).value
        report.measured_trapped = trapped_area(cfg, qc).value
    except Exception as exc:
        report.error = str(exc)
        report.chain_ok = False
        exc.partial_report = report
        raise
    report.measured_energy = E
    report.measured_unoriented = A
    _link(report, "lower_new <= E", report.lower_new, E, qc)
    _link(report, "E <= 8 L A", E, 8 * geom.L * A, qc)
    if report.classification.kind is Kind.NONCONFORMAL:
        W = cfg.glue.W
        report.glue_W = W
        area_cap = abs(omega_chi(vt.e, vt.k, -1 if vt.m < 0 else 1)) * math.pi / 2 + 4 * math.pi * W
        _link(report, "A <= |Omega_-| + 4 pi W", A, area_cap, qc)
        _link(report, "|Omega_-| + 4 pi W <= 9/2 pi sum|w|", area_cap, 4.5 * math.pi * w.sum_abs, qc)
        _link(report, "2 W <= sum|w|", 2 * W, w.sum_abs, qc)
        _link(report, "E <= 36 pi L sum|w|", E, report.upper_formula, qc)
    else:
        _link(report, "E <= 8 L |Omega|", E, report.upper_formula, qc)
    return report
