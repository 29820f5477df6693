"""Explicit representative configurations and their pole-stable evaluation.

A configuration is the stereographic image F(w, wbar) of a radially constant
director field on the quarter disk Q = {|w| <= 1, Re w >= 0, Im w >= 0}.  The
base is a rational function with tangent boundary behaviour; wrappers are
applied in the order: Mobius rotations, glue insertion, complex conjugation.

Values are carried as projective pairs (N, D) with F = N / D together with
their Wirtinger derivatives, so nothing is ever divided by a vanishing
denominator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ClassificationError, ConstructionError, DomainError, GeometryError
from .topology import (
    Kind,
    VertexTopology,
    classify,
    conjugate_topology,
    omega_chi,
    rotate_topology,
)

__all__ = [
    "RationalSpec",
    "GlueData",
    "Configuration",
    "ProjectiveValue",
    "JetValue",
    "ProjectiveJet",
    "mobius_r",
    "mobius_r_inv",
    "spec_invariants",
    "config_invariants",
    "conformal_case",
    "conformal_spec",
    "build_conformal",
    "build_anticonformal",
    "build_nonconformal",
    "build_representative",
    "evaluate",
    "evaluate_array",
    "densities",
    "director",
    "in_quarter_disk",
    "special_points",
    "random_spec",
    "DOMAIN_TOL",
]

DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class RationalSpec:
    """Parameters of the conformal family.

    ``real_factors`` are (r, rho) with 0 < r < 1 strictly increasing,
    ``imag_factors`` are (s, sigma) likewise, ``interior_factors`` are
    (t, tau) with t in the open interior of Q.  rho = +1 marks a zero,
    -1 a pole.
    """

    epsilon: int = 1
    n: int = 1
    real_factors: Tuple[Tuple[float, int], ...] = ()
    imag_factors: Tuple[Tuple[float, int], ...] = ()
    interior_factors: Tuple[Tuple[complex, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "real_factors", tuple((float(r), int(s)) for r, s in self.real_factors))
        object.__setattr__(self, "imag_factors", tuple((float(r), int(s)) for r, s in self.imag_factors))
        object.__setattr__(
            self, "interior_factors", tuple((complex(t), int(s)) for t, s in self.interior_factors)
        )
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if self.n % 2 == 0:
            raise ValueError(f"n must be odd, got {self.n}")
        for label, factors in (("real", self.real_factors), ("imaginary", self.imag_factors)):
            positions = [p for p, _ in factors]
            if any(not 0.0 < p < 1.0 for p in positions):
                raise ValueError(f"{label} factor positions must lie in (0, 1)")
            if any(b <= a for a, b in zip(positions, positions[1:])):
                raise ValueError(f"{label} factor positions must be strictly increasing")
        for t, _ in self.interior_factors:
            if not (abs(t) < 1.0 and t.real > 0.0 and t.imag > 0.0):
                raise ValueError(f"interior factor {t} is not in the open quarter disk")
        for _, sign in self.real_factors + self.imag_factors + self.interior_factors:
            if sign not in (1, -1):
                raise ValueError("factor exponents must be +1 or -1")

    @property
    def a(self) -> int:
        return len(self.real_factors)

    @property
    def b(self) -> int:
        return len(self.imag_factors)

    @property
    def c(self) -> int:
        return len(self.interior_factors)


@dataclass(frozen=True)
class GlueData:
    """Antianalytic disk of radius ``eps`` about ``w0``, blended out to ``2 eps``."""

    w0: complex
    eps: float
    W: int

    def __post_init__(self):
        object.__setattr__(self, "w0", complex(self.w0))
        object.__setattr__(self, "eps", float(self.eps))
        if int(self.W) != self.W or self.W < 1:
            raise ValueError("W must be a positive integer")
        object.__setattr__(self, "W", int(self.W))
        if not self.eps > 0:
            raise ValueError("eps must be positive")


@dataclass(frozen=True)
class Configuration:
    base: RationalSpec
    rotations: int = 0
    conjugated: bool = False
    glue: Optional[GlueData] = None

    def __post_init__(self):
        if self.rotations not in (0, 1, 2):
            raise ValueError("rotations must be 0, 1 or 2")
        if self.glue is not None:
            g = self.glue
            if _distance_to_boundary(g.w0) <= 2 * g.eps:
                raise ValueError("glue disk D(w0, 2 eps) must lie strictly inside Q")

    def without_glue(self) -> "Configuration":
        return replace(self, glue=None)


class ProjectiveValue(NamedTuple):
    """Point N / D of the Riemann sphere, normalised so max(|N|, |D|) = 1."""

    N: complex
    D: complex

    @property
    def is_pole(self) -> bool:
        return abs(self.D) == 0.0

    def finite(self) -> complex:
        return self.N / self.D


class JetValue(NamedTuple):
    """Value plus Wirtinger derivatives in the chart where |scalar| <= 1.

    In the pole chart (``pole_chart`` true) ``scalar``, ``dw`` and ``dwbar``
    refer to 1 / F.
    """

    value: ProjectiveValue
    scalar: complex
    dw: complex
    dwbar: complex
    pole_chart: bool


class ProjectiveJet(NamedTuple):
    """Arrays N, D and their Wirtinger derivatives at a batch of points."""

    N: np.ndarray
    D: np.ndarray
    Nw: np.ndarray
    Nwb: np.ndarray
    Dw: np.ndarray
    Dwb: np.ndarray


# --------------------------------------------------------------------------
# Mobius rotation of Q


def mobius_r(w: complex) -> complex:
    """r(w) = (i - w) / (i + w); maps Q onto itself, 0 -> 1 -> i -> 0."""
    w = complex(w)
    if w == -1j:
        raise DomainError("r(w) has a pole at w = -i")
    return (1j - w) / (1j + w)


def mobius_r_inv(w: complex) -> complex:
    """Inverse of :func:`mobius_r`, i (1 - w) / (1 + w)."""
    w = complex(w)
    if w == -1:
        raise DomainError("r^{-1}(w) has a pole at w = -1")
    return 1j * (1 - w) / (1 + w)


def _distance_to_boundary(w: complex) -> float:
    return min(w.real, w.imag, 1.0 - abs(w))


def in_quarter_disk(w, tol: float = DOMAIN_TOL):
    w = np.asarray(w, dtype=complex)
    return (np.abs(w) <= 1 + tol) & (w.real >= -tol) & (w.imag >= -tol)


# --------------------------------------------------------------------------
# Invariants from parameters


def spec_invariants(rs: RationalSpec) -> VertexTopology:
    """Edge signs, kink numbers and trapped area of the conformal field ``rs``."""
    a, b, c, n, eps = rs.a, rs.b, rs.c, rs.n, rs.epsilon
    ex = eps * (-1) ** a
    ey = eps * (-1) ** b * (-1) ** (((n - 1) // 2) % 2)
    ez = 1 if n > 0 else -1
    rho = [s for _, s in rs.real_factors]
    sig = [s for _, s in rs.imag_factors]
    tau = [s for _, s in rs.interior_factors]
    odd_a, odd_b = a % 2, b % 2
    alt_rho = sum((-1) ** j * s for j, s in enumerate(rho, start=1))
    alt_sig = sum((-1) ** k * s for k, s in enumerate(sig, start=1))
    kx = Fraction(-((-1) ** b) * ey * (alt_sig + odd_b * ez), 2)
    ky = Fraction(-((-1) ** a) * ex * (alt_rho + odd_a * ez), 2)
    kz = Fraction(ex * ey - n, 4) - Fraction(sum(rho), 2) - Fraction(sum(sig), 2) - sum(tau)
    for value in (kx, ky, kz):
        if value.denominator != 1:
            raise ConstructionError(f"non-integral kink number {value} for {rs}")
    m = -(abs(n) + 2 * (a + b) + 4 * c)
    return VertexTopology((ex, ey, ez), (int(kx), int(ky), int(kz)), m)


def config_invariants(cfg: Configuration) -> VertexTopology:
    """Invariants implied by the construction (formula level, no numerics)."""
    vt = spec_invariants(cfg.base)
    for _ in range(cfg.rotations):
        vt = rotate_topology(vt)
    if cfg.glue is not None:
        vt = VertexTopology(vt.e, vt.k, vt.m + 8 * cfg.glue.W)
    if cfg.conjugated:
        vt = conjugate_topology(vt)
    return vt


# --------------------------------------------------------------------------
# Conformal construction


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _positions(count: int):
    return [j / (count + 1) for j in range(1, count + 1)]


def _interior_positions(count: int):
    return [0.5 * cmath.exp(1j * math.pi * l / (2 * (count + 1))) for l in range(1, count + 1)]


def conformal_case(vt: VertexTopology) -> Tuple[str, Optional[int]]:
    """Case label ('1a', '1b', '2a', '2b') and distinguished axis (0, 1, 2 or None).

    The distinguished axis for 1b/2a is z if admissible, else x, else y.
    """
    e, k = vt.e, vt.k
    products = [ej * kj for ej, kj in zip(e, k)]
    if e.product == 1:
        if all(p > 0 for p in products):
            return "1a", None
        for axis in (2, 0, 1):
            if products[axis] <= 0:
                return "1b", axis
    else:
        for axis in (2, 0, 1):
            if products[axis] < 0:
                return "2a", axis
        return "2b", None
    raise AssertionError("unreachable")


def _quarter(numer: int, what: str) -> int:
    if numer % 4:
        raise ConstructionError(f"{what}: {numer}/4 is not an integer")
    return numer // 4


def conformal_spec(vt: VertexTopology) -> RationalSpec:
    """Parameters for a conformal topology whose distinguished axis (if any) is z."""
    case, axis = conformal_case(vt)
    if axis not in (None, 2):
        raise ConstructionError(f"case {case} needs axis z, got axis {axis}")
    (ex, ey, ez), (kx, ky, kz), m = vt.e, vt.k, vt.m
    if case == "1a":
        epsilon, n = -ex, ez
        a, b = 2 * abs(ky) - 1, 2 * abs(kx) - 1
        rho = [(-1) ** j * ez for j in range(1, a + 1)]
        sig = [(-1) ** j * ez for j in range(1, b + 1)]
        c = _quarter(-m + 3, "case 1a c") - abs(kx) - abs(ky)
        tau = [-ez if l < abs(kz) else (-1) ** l for l in range(1, c + 1)]
        slack = c - (abs(kz) - 1)
        if slack < 0 or slack % 2:
            raise ConstructionError(f"case 1a: c - (|kz| - 1) = {slack} not nonnegative even")
    elif case in ("1b", "2a"):
        epsilon = ex
        n = (4 * abs(kz) + 1) * ez if case == "1b" else -(4 * kz + ez)
        a, b = 2 * abs(ky), 2 * abs(kx)
        rho = [-((-1) ** j) * ex * _sgn(ky) for j in range(1, a + 1)]
        sig = [-((-1) ** j) * ey * _sgn(kx) for j in range(1, b + 1)]
        shift = -1 if case == "1b" else 1
        c = _quarter(-m + shift, f"case {case} c") - abs(kx) - abs(ky) - abs(kz)
        tau = [(-1) ** l for l in range(1, c + 1)]
        if c < 0 or c % 2:
            raise ConstructionError(f"case {case}: c = {c} not nonnegative even")
    else:  # 2b
        epsilon, n = ex, 3 * ez
        a, b = 2 * abs(ky), 2 * abs(kx)
        rho = [ez * (-1) ** j for j in range(1, a + 1)]
        sig = [ez * (-1) ** j for j in range(1, b + 1)]
        c = _quarter(-m - 3, "case 2b c") - abs(kx) - abs(ky)
        tau = [-ez if l <= abs(kz) + 1 else (-1) ** l for l in range(1, c + 1)]
        slack = c - (abs(kz) + 1)
        if slack < 0 or slack % 2:
            raise ConstructionError(f"case 2b: c - (|kz| + 1) = {slack} not nonnegative even")
    rs = RationalSpec(
        epsilon=epsilon,
        n=n,
        real_factors=tuple(zip(_positions(a), rho)),
        imag_factors=tuple(zip(_positions(b), sig)),
        interior_factors=tuple(zip(_interior_positions(c), tau)),
    )
    if spec_invariants(rs) != vt:
        raise ConstructionError(f"case {case} parameters reproduce {spec_invariants(rs)}, not {vt}")
    return rs


def build_conformal(vt: VertexTopology) -> Configuration:
    cls = classify(vt)
    if cls.kind is not Kind.CONFORMAL:
        raise ClassificationError(f"{vt} is {cls.kind}, not conformal")
    _, axis = conformal_case(vt)
    # rotating once moves y to z, twice moves x to z
    turns = {None: 0, 2: 0, 1: 1, 0: 2}[axis]
    target = vt
    for _ in range(turns):
        target = rotate_topology(target)
    return Configuration(conformal_spec(target), rotations=(3 - turns) % 3)


def build_anticonformal(vt: VertexTopology) -> Configuration:
    cls = classify(vt)
    if cls.kind is not Kind.ANTICONFORMAL:
        raise ClassificationError(f"{vt} is {cls.kind}, not anticonformal")
    return replace(build_conformal(conjugate_topology(vt)), conjugated=True)


DEFAULT_W0 = 0.5 * cmath.exp(1j * math.pi / 4)


def _glue_candidates():
    yield DEFAULT_W0
    for radius in (0.3, 0.4, 0.5, 0.6, 0.7):
        for frac in (1 / 8, 2 / 8, 3 / 8, 4 / 8, 5 / 8, 6 / 8, 7 / 8):
            yield radius * cmath.exp(1j * math.pi / 2 * frac)


def _clearance(w0: complex, poles) -> float:
    d = _distance_to_boundary(w0)
    for p in poles:
        d = min(d, abs(w0 - p))
    return d


def _base_is_finite(cfg: Configuration, w0: complex, radius: float) -> bool:
    rho = np.linspace(0.0, radius, 33)
    theta = np.linspace(0.0, 2 * math.pi, 65)
    pts = (w0 + rho[:, None] * np.exp(1j * theta[None, :])).ravel()
    jet = evaluate_array(cfg.without_glue(), pts)
    return bool(np.all(np.abs(jet.N) < 1e8 * np.abs(jet.D)))


def place_glue(base: Configuration, W: int) -> GlueData:
    """Default glue: w0 = 0.5 e^{i pi/4}, eps = clearance / 4 (clearance to poles and dQ)."""
    _, poles = special_points(base)
    w0 = DEFAULT_W0
    clearance = _clearance(w0, poles)
    if clearance < 0.1:
        w0 = max(_glue_candidates(), key=lambda c: _clearance(c, poles))
        clearance = _clearance(w0, poles)
    eps = clearance / 4
    for _ in range(8):
        if _base_is_finite(base, w0, 2 * eps):
            return GlueData(w0, eps, W)
        eps /= 2
    raise GeometryError(
        "could not find a pole-free glue disk",
        {"w0": w0, "eps": eps, "poles": [complex(p) for p in poles]},
    )


def build_nonconformal(vt: VertexTopology, qc=None, check: bool = True) -> Configuration:
    """Glued analytic/antianalytic representative of a nonconformal topology.

    For m < 0 the analytic part is the conformal representative with trapped
    area -m_-, and the antianalytic disk raises every wrapping number by
    W = (m + m_-) / 8.  m > 0 is handled by conjugation.  With ``check`` the
    trapped area is measured and eps halved (up to 8 times) until it rounds
    cleanly.
    """
    cls = classify(vt)
    if cls.kind is not Kind.NONCONFORMAL:
        raise ClassificationError(f"{vt} is {cls.kind}, not nonconformal")
    if vt.m > 0:
        inner = build_nonconformal(conjugate_topology(vt), qc=qc, check=check)
        return replace(inner, conjugated=True)
    m_minus = omega_chi(vt.e, vt.k, -1)
    base = build_conformal(VertexTopology(vt.e, vt.k, -m_minus))
    W, rem = divmod(vt.m + m_minus, 8)
    if rem or W < 1:
        raise ConstructionError(f"W = ({vt.m} + {m_minus}) / 8 is not a positive integer")
    glue = place_glue(base, W)
    cfg = replace(base, glue=glue)
    if not check:
        return cfg
    from .quadrature import QuadratureConfig, trapped_area

    qc = qc or QuadratureConfig()
    history = []
    for _ in range(9):
        est = trapped_area(cfg, qc)
        residual = abs(est.value - vt.m * math.pi / 2)
        tol = max(qc.abs_tol, qc.rel_tol * abs(est.value))
        history.append((cfg.glue.eps, est.value, residual))
        if residual <= 10 * tol:
            return cfg
        cfg = replace(cfg, glue=replace(cfg.glue, eps=cfg.glue.eps / 2))
    raise GeometryError("glued trapped area did not round cleanly", {"history": history})


def build_representative(vt: VertexTopology, qc=None, check: bool = True) -> Configuration:
    """Class-appropriate representative of any realizable topology."""
    kind = classify(vt).kind
    if kind is Kind.CONFORMAL:
        return build_conformal(vt)
    if kind is Kind.ANTICONFORMAL:
        return build_anticonformal(vt)
    return build_nonconformal(vt, qc=qc, check=check)


# --------------------------------------------------------------------------
# Evaluation


def _rescale(*arrays):
    scale = np.maximum(np.abs(arrays[0]), np.abs(arrays[1]))
    scale = np.where(scale > 0, scale, 1.0)
    return tuple(a / scale for a in arrays)


def _rational_jet(rs: RationalSpec, w: np.ndarray):
    """N, D, dN/dw, dD/dw of the base rational function."""
    one = np.ones_like(w)
    zero = np.zeros_like(w)
    N, D, dN, dD = rs.epsilon * one, one.copy(), zero.copy(), zero.copy()
    w2 = w * w

    count = [0]

    def mul(N, D, dN, dD, p, dp, q, dq, sign):
        if sign < 0:
            p, dp, q, dq = q, dq, p, dp
        out = (N * p, D * q, dN * p + N * dp, dD * q + D * dq)
        # factors are bounded on Q, so an occasional rescale prevents overflow
        count[0] += 1
        return _rescale(*out) if count[0] % 8 == 0 else out

    deg = abs(rs.n)
    wn = w ** deg
    dwn = deg * w ** (deg - 1)
    N, D, dN, dD = mul(N, D, dN, dD, wn, dwn, one, zero, 1 if rs.n > 0 else -1)
    for r, rho in rs.real_factors:
        r2 = r * r
        N, D, dN, dD = mul(N, D, dN, dD, w2 - r2, 2 * w, r2 * w2 - 1, 2 * r2 * w, rho)
    for s, sig in rs.imag_factors:
        s2 = s * s
        N, D, dN, dD = mul(N, D, dN, dD, w2 + s2, 2 * w, s2 * w2 + 1, 2 * s2 * w, sig)
    for t, tau in rs.interior_factors:
        t2, tb2 = t * t, np.conj(t) ** 2
        A, B = w2 - t2, w2 - tb2
        C, E = t2 * w2 - 1, tb2 * w2 - 1
        p, dp = A * B, 2 * w * (A + B)
        q, dq = C * E, 2 * w * (t2 * E + tb2 * C)
        N, D, dN, dD = mul(N, D, dN, dD, p, dp, q, dq, tau)
    return _rescale(N, D, dN, dD)


def _analytic_jet(cfg: Configuration, w: np.ndarray):
    """Rotated base: N, D and d/dw (the wbar-derivatives vanish)."""
    u = w
    chain = np.ones_like(w)
    for _ in range(cfg.rotations):
        chain = chain * (-2j / (1 + u) ** 2)
        u = 1j * (1 - u) / (1 + u)
    N, D, dN, dD = _rational_jet(cfg.base, u)
    dN, dD = dN * chain, dD * chain
    for _ in range(cfg.rotations):
        N, D, dN, dD = _rescale(1j * D - N, 1j * D + N, 1j * dD - dN, 1j * dD + dN)
    return N, D, dN, dD


def _apply_glue(glue: GlueData, f0: complex, w, N, D, dN, dD):
    zero = np.zeros_like(w)
    Nw, Nwb, Dw, Dwb = dN, zero.copy(), dD, zero.copy()
    N, D = N.copy(), D.copy()
    rel = w - glue.w0
    rho = np.abs(rel)
    eps, W = glue.eps, glue.W

    ann = (rho >= eps) & (rho < 2 * eps)
    if np.any(ann):
        f = N[ann] / D[ann]
        df = (dN[ann] * D[ann] - N[ann] * dD[ann]) / D[ann] ** 2
        z, r = rel[ann], rho[ann]
        g = f0 + z ** W
        dg = W * z ** (W - 1)
        s = (r - eps) / eps
        s_w = np.conj(z) / (2 * eps * r)
        s_wb = z / (2 * eps * r)
        N[ann] = s * f + (1 - s) * g
        D[ann] = 1.0
        Nw[ann] = s_w * (f - g) + s * df + (1 - s) * dg
        Nwb[ann] = s_wb * (f - g)
        Dw[ann] = 0.0
        Dwb[ann] = 0.0

    disk = rho < eps
    if np.any(disk):
        zeta = np.conj(rel[disk]) / eps
        zW = zeta ** W
        dzW = W * zeta ** (W - 1) / eps
        N[disk] = f0 * zW + eps ** W
        D[disk] = zW
        Nw[disk] = 0.0
        Dw[disk] = 0.0
        Nwb[disk] = f0 * dzW
        Dwb[disk] = dzW
    return N, D, Nw, Nwb, Dw, Dwb


def evaluate_array(cfg: Configuration, w, check_domain: bool = True) -> ProjectiveJet:
    """Projective jet of ``cfg`` at an array of points of Q."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if check_domain and not np.all(in_quarter_disk(w)):
        bad = w[~in_quarter_disk(w)][0]
        raise DomainError(f"point {bad} lies outside the quarter disk")
    N, D, dN, dD = _analytic_jet(cfg, w)
    zero = np.zeros_like(w)
    if cfg.glue is None:
        jet = (N, D, dN, zero, dD, zero.copy())
    else:
        n0, d0, _, _ = _analytic_jet(cfg, np.array([cfg.glue.w0]))
        f0 = complex(n0[0] / d0[0])
        jet = _apply_glue(cfg.glue, f0, w, N, D, dN, dD)
    if cfg.conjugated:
        N, D, Nw, Nwb, Dw, Dwb = jet
        jet = (np.conj(N), np.conj(D), np.conj(Nwb), np.conj(Nw), np.conj(Dwb), np.conj(Dw))
    return ProjectiveJet(*_rescale(*jet))


def director(cfg: Configuration, w, check_domain: bool = True) -> np.ndarray:
    """Unit director (shape (..., 3)) at points of Q, computed from the
    projective value so poles need no special handling."""
    jet = evaluate_array(cfg, w, check_domain)
    N, D = jet.N, jet.D
    norm = np.abs(N) ** 2 + np.abs(D) ** 2
    xy = 2 * N * np.conj(D) / norm
    z = (np.abs(D) ** 2 - np.abs(N) ** 2) / norm
    return np.stack([xy.real, xy.imag, z], axis=-1)


def evaluate(cfg: Configuration, w: complex) -> JetValue:
    jet = evaluate_array(cfg, np.array([complex(w)]))
    N, D, Nw, Nwb, Dw, Dwb = (complex(a[0]) for a in jet)
    Aw = Nw * D - N * Dw
    Awb = Nwb * D - N * Dwb
    if abs(N) <= abs(D):
        return JetValue(ProjectiveValue(N, D), N / D, Aw / D ** 2, Awb / D ** 2, False)
    return JetValue(ProjectiveValue(N, D), D / N, -Aw / N ** 2, -Awb / N ** 2, True)


def densities(jet: ProjectiveJet):
    """Oriented and unoriented spherical area densities per unit d^2w.

    oriented = 4 (|F_wbar|^2 - |F_w|^2) / (1 + |F|^2)^2 and unoriented the
    same with a plus sign, written in terms of the projective pair.
    """
    Aw = jet.Nw * jet.D - jet.N * jet.Dw
    Awb = jet.Nwb * jet.D - jet.N * jet.Dwb
    denom = (np.abs(jet.N) ** 2 + np.abs(jet.D) ** 2) ** 2
    a = np.abs(Awb) ** 2
    b = np.abs(Aw) ** 2
    return 4 * (a - b) / denom, 4 * (a + b) / denom


# --------------------------------------------------------------------------
# Zeros and poles inside Q


def _spec_polynomials(rs: RationalSpec):
    """Numerator and denominator coefficient arrays (lowest degree first)."""
    num, den = np.array([rs.epsilon], dtype=complex), np.array([1.0], dtype=complex)
    mono = np.zeros(abs(rs.n) + 1, dtype=complex)
    mono[-1] = 1.0
    if rs.n > 0:
        num = P.polymul(num, mono)
    else:
        den = P.polymul(den, mono)

    def attach(num, den, p, q, sign):
        return (P.polymul(num, p), P.polymul(den, q)) if sign > 0 else (P.polymul(num, q), P.polymul(den, p))

    for r, rho in rs.real_factors:
        num, den = attach(num, den, [-r * r, 0, 1], [-1, 0, r * r], rho)
    for s, sig in rs.imag_factors:
        num, den = attach(num, den, [s * s, 0, 1], [1, 0, s * s], sig)
    for t, tau in rs.interior_factors:
        t2, tb2 = t * t, np.conj(t) ** 2
        p = P.polymul([-t2, 0, 1], [-tb2, 0, 1])
        q = P.polymul([-1, 0, t2], [-1, 0, tb2])
        num, den = attach(num, den, p, q, tau)
    return num, den


def _compose_r_inv(coeffs, degree):
    """Coefficients of (1 + w)^degree * p(i (1 - w) / (1 + w))."""
    out = np.zeros(1, dtype=complex)
    for j, cj in enumerate(coeffs):
        term = P.polymul(P.polypow([1j, -1j], j), P.polypow([1, 1], degree - j))
        out = P.polyadd(out, cj * term)
    return out


def special_points(cfg: Configuration):
    """Zeros and poles of the (rotated) base lying in the closed quarter disk.

    Exact for unrotated bases; polynomial roots otherwise.  The glue is ignored.
    """
    rs = cfg.base
    if cfg.rotations == 0:
        zeros, poles = [], []
        (zeros if rs.n > 0 else poles).append(0j)
        for r, s in rs.real_factors:
            (zeros if s > 0 else poles).append(complex(r))
        for r, s in rs.imag_factors:
            (zeros if s > 0 else poles).append(1j * r)
        for t, s in rs.interior_factors:
            (zeros if s > 0 else poles).append(t)
    else:
        num, den = _spec_polynomials(rs)
        for _ in range(cfg.rotations):
            degree = max(len(num), len(den)) - 1
            n2, d2 = _compose_r_inv(num, degree), _compose_r_inv(den, degree)
            num, den = P.polysub(1j * d2, n2), P.polyadd(1j * d2, n2)
        num, den = np.trim_zeros(num, "b"), np.trim_zeros(den, "b")
        zeros = _polish(cfg, P.polyroots(num), +1) if len(num) > 1 else []
        poles = _polish(cfg, P.polyroots(den), -1) if len(den) > 1 else []
    keep = lambda pts: [complex(p) for p in pts if in_quarter_disk(p, 1e-6)]
    return keep(zeros), keep(poles)


def _polish(cfg: Configuration, roots, kind: int, steps: int = 80):
    """Newton-refine polynomial roots on the rotated base itself, then merge
    copies of multiple roots and snap near-boundary points onto the boundary."""
    w = np.asarray(roots, dtype=complex)
    near = np.abs(w) < 1.5
    w = w[near]
    for _ in range(steps):
        N, D, dN, dD = _analytic_jet(cfg, w)
        slope = dN * D - N * dD
        with np.errstate(divide="ignore", invalid="ignore"):
            step = kind * N * D / slope
        step = np.where(np.isfinite(step), step, 0.0)
        w = w - step
        if np.all(np.abs(step) < 1e-15):
            break
    out = []
    for p in w:
        if abs(p.real) < 1e-7:
            p = complex(0.0, p.imag)
        if abs(p.imag) < 1e-7:
            p = complex(p.real, 0.0)
        if abs(abs(p) - 1.0) < 1e-7:
            p = p / abs(p)
        if all(abs(p - q) > 1e-6 for q in out):
            out.append(p)
    return out


def random_spec(rng, max_real=4, max_imag=4, max_interior=3, max_abs_n=7, gap=0.05) -> RationalSpec:
    """Random valid spec with factor positions kept ``gap`` apart from each
    other and from the boundary.  ``rng`` is a numpy Generator."""

    def spaced(count):
        while True:
            pos = np.sort(rng.uniform(gap, 1.0 - gap, count))
            if count < 2 or np.min(np.diff(pos)) >= gap:
                return [float(p) for p in pos]

    def signs(count):
        return [int(s) for s in rng.choice((-1, 1), count)]

    a = int(rng.integers(0, max_real + 1))
    b = int(rng.integers(0, max_imag + 1))
    c = int(rng.integers(0, max_interior + 1))
    n = int(rng.choice([j for j in range(-max_abs_n, max_abs_n + 1) if j % 2]))
    interior = []
    while len(interior) < c:
        t = complex(*rng.uniform(0.0, 1.0, 2))
        clear = min(t.real, t.imag, 1.0 - abs(t))
        if clear >= gap and all(abs(t - u) >= gap for u in interior):
            interior.append(t)
    return RationalSpec(
        epsilon=int(rng.choice((-1, 1))),
        n=n,
        real_factors=tuple(zip(spaced(a), signs(a))),
        imag_factors=tuple(zip(spaced(b), signs(b))),
        interior_factors=tuple(zip(interior, signs(c))),
    )
