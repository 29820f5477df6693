"""Exact integer invariants of reflection-symmetric prism topologies.

A topology is fixed by its invariants at the origin vertex: edge signs ``e``,
kink numbers ``k`` and the trapped area stored as an integer ``m`` in units of
pi/2.  Everything here is integer arithmetic; floats only appear when a caller
asks for ``omega``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Tuple

from .errors import RealizabilityError

__all__ = [
    "SignTriple",
    "KinkTriple",
    "VertexTopology",
    "WrappingNumbers",
    "Kind",
    "Classification",
    "PrismTopology",
    "OCTANTS",
    "wrapping_numbers",
    "is_realizable",
    "realizability_violation",
    "omega_chi",
    "classify",
    "conjugate_topology",
    "rotate_topology",
    "extend_to_prism",
    "check_sum_rules",
    "sweep_topologies",
]


def _sign(value: int) -> int:
    if value not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class SignTriple:
    """Three signs, used both for edge signs and for octant labels."""

    sx: int
    sy: int
    sz: int

    def __post_init__(self):
        for name in ("sx", "sy", "sz"):
            object.__setattr__(self, name, _sign(getattr(self, name)))

    def __iter__(self) -> Iterator[int]:
        return iter((self.sx, self.sy, self.sz))

    def __getitem__(self, j: int) -> int:
        return (self.sx, self.sy, self.sz)[j]

    @property
    def product(self) -> int:
        return self.sx * self.sy * self.sz

    def __str__(self):
        return ",".join("+" if s > 0 else "-" for s in self)


@dataclass(frozen=True)
class KinkTriple:
    kx: int
    ky: int
    kz: int

    def __post_init__(self):
        for name in ("kx", "ky", "kz"):
            value = getattr(self, name)
            if int(value) != value:
                raise ValueError(f"kink numbers must be integers, got {value!r}")
            object.__setattr__(self, name, int(value))

    def __iter__(self) -> Iterator[int]:
        return iter((self.kx, self.ky, self.kz))

    def __getitem__(self, j: int) -> int:
        return (self.kx, self.ky, self.kz)[j]

    def __neg__(self) -> "KinkTriple":
        return KinkTriple(-self.kx, -self.ky, -self.kz)

    def __str__(self):
        return ",".join(str(k) for k in self)


# canonical octant order: sigma_x major, '+' before '-'
OCTANTS: Tuple[SignTriple, ...] = tuple(
    SignTriple(*s) for s in itertools.product((1, -1), repeat=3)
)


@dataclass(frozen=True)
class VertexTopology:
    """Invariants at one vertex.  ``m`` is the trapped area in units of pi/2.

    Tuples are accepted for ``e`` and ``k``.  Realizability is *not* enforced
    here; operations check it so they can say what is wrong.
    """

    e: SignTriple
    k: KinkTriple
    m: int

    def __post_init__(self):
        if not isinstance(self.e, SignTriple):
            object.__setattr__(self, "e", SignTriple(*self.e))
        if not isinstance(self.k, KinkTriple):
            object.__setattr__(self, "k", KinkTriple(*self.k))
        if int(self.m) != self.m:
            raise ValueError(f"m must be an integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def omega(self) -> float:
        """Trapped area in steradians."""
        return self.m * math.pi / 2

    def __str__(self):
        return f"(e=({self.e}); k=({self.k}); m={self.m})"


@dataclass(frozen=True)
class WrappingNumbers:
    """Eight wrapping numbers, stored in canonical octant order."""

    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != 8:
            raise ValueError("expected eight wrapping numbers")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __getitem__(self, sigma) -> int:
        if not isinstance(sigma, SignTriple):
            sigma = SignTriple(*sigma)
        return self.values[OCTANTS.index(sigma)]

    def items(self):
        return zip(OCTANTS, self.values)

    def as_dict(self) -> Dict[str, int]:
        return {str(s): v for s, v in self.items()}

    @property
    def total(self) -> int:
        return sum(self.values)

    @property
    def sum_abs(self) -> int:
        return sum(abs(v) for v in self.values)


class Kind(enum.Enum):
    CONFORMAL = "conformal"
    ANTICONFORMAL = "anticonformal"
    NONCONFORMAL = "nonconformal"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Classification:
    kind: Kind
    boundary: bool = False


def _eight_w(vt: VertexTopology, sigma: SignTriple) -> int:
    """8 * w_sigma, always an integer."""
    e, k = vt.e, vt.k
    twist = -7 if tuple(sigma) == tuple(e) else 1
    return vt.m + 4 * sum(s * kj for s, kj in zip(sigma, k)) + e.product * twist


def realizability_violation(vt: VertexTopology):
    """Reason string if ``vt`` is not realizable, else None."""
    if vt.m % 2 == 0:
        return "m must be odd"
    residue = (vt.m + 4 * sum(vt.k) + vt.e.product) % 8
    if residue:
        return (
            "m + 4(kx+ky+kz) + ex*ey*ez must be divisible by 8 "
            f"(got residue {residue} mod 8)"
        )
    return None


def is_realizable(vt: VertexTopology) -> bool:
    """True iff m is odd and all eight wrapping numbers are integers."""
    return realizability_violation(vt) is None


def _require_realizable(vt: VertexTopology) -> None:
    reason = realizability_violation(vt)
    if reason is not None:
        raise RealizabilityError(f"{vt} is not realizable: {reason}")


def wrapping_numbers(vt: VertexTopology) -> WrappingNumbers:
    _require_realizable(vt)
    return WrappingNumbers(tuple(_eight_w(vt, s) // 8 for s in OCTANTS))


def omega_chi(e, k, chi: int) -> int:
    """Threshold m_chi (units of pi/2) separating (anti)conformal topologies.

    ``chi = -1`` gives the conformal threshold (conformal iff m <= -m_-),
    ``chi = +1`` the anticonformal one (anticonformal iff m >= m_+).
    """
    e = e if isinstance(e, SignTriple) else SignTriple(*e)
    k = k if isinstance(k, KinkTriple) else KinkTriple(*k)
    chi = _sign(chi)
    base = 4 * sum(abs(kj) for kj in k)
    if chi * e.product == 1:
        corner = all(chi * ej * kj <= 0 for ej, kj in zip(e, k))
        return base + (7 if corner else -1)
    corner = all(chi * ej * kj < 0 for ej, kj in zip(e, k))
    return base - (7 if corner else -1)


def classify(vt: VertexTopology) -> Classification:
    _require_realizable(vt)
    m_minus = omega_chi(vt.e, vt.k, -1)
    m_plus = omega_chi(vt.e, vt.k, +1)
    if vt.m <= -m_minus:
        return Classification(Kind.CONFORMAL, vt.m == -m_minus)
    if vt.m >= m_plus:
        return Classification(Kind.ANTICONFORMAL, vt.m == m_plus)
    return Classification(Kind.NONCONFORMAL, False)


def conjugate_topology(vt: VertexTopology) -> VertexTopology:
    """Invariants of the complex-conjugate configuration."""
    ex, ey, ez = vt.e
    kx, ky, kz = vt.k
    return VertexTopology((ex, -ey, ez), (-kx, ky, -kz), -vt.m)


def rotate_topology(vt: VertexTopology) -> VertexTopology:
    """Invariants after one conjugation by the order-3 Mobius rotation."""
    ex, ey, ez = vt.e
    kx, ky, kz = vt.k
    return VertexTopology((ez, ex, ey), (kz, kx, ky), vt.m)


@dataclass(frozen=True)
class PrismTopology:
    """Per-vertex invariants keyed by corner coordinates (0 or L_j per axis)."""

    lengths: Tuple[float, float, float]
    vertex_data: Mapping[Tuple[float, float, float], VertexTopology] = field(
        default_factory=dict
    )

    def bits(self, corner) -> Tuple[int, int, int]:
        return tuple(int(round(c / L)) for c, L in zip(corner, self.lengths))

    def corner(self, bits) -> Tuple[float, float, float]:
        return tuple(float(b * L) for b, L in zip(bits, self.lengths))

    def at(self, bits) -> VertexTopology:
        return self.vertex_data[self.corner(bits)]

    def replace(self, bits, vt: VertexTopology) -> "PrismTopology":
        data = dict(self.vertex_data)
        data[self.corner(bits)] = vt
        return PrismTopology(self.lengths, data)


def extend_to_prism(vt: VertexTopology, geom) -> PrismTopology:
    """Reflection-symmetric extension: k and m flip once per reflection."""
    _require_realizable(vt)
    lengths = (float(geom.Lx), float(geom.Ly), float(geom.Lz))
    data = {}
    for bits in itertools.product((0, 1), repeat=3):
        sign = -1 if sum(bits) % 2 else 1
        corner = tuple(float(b * L) for b, L in zip(bits, lengths))
        data[corner] = VertexTopology(vt.e, tuple(sign * kj for kj in vt.k), sign * vt.m)
    return PrismTopology(lengths, data)


def check_sum_rules(pt: PrismTopology) -> List[str]:
    """Violated sum rules (empty list iff all hold).

    Face rule on a face normal to axis j, with (a, b) the next two axes in
    cyclic order:  sum_v (k_j - 1/4 (-1)^{b_a} (-1)^{b_b} e_a e_b) = 0.
    Evaluated times 4 to stay in integers.
    """
    violations = []
    by_bits = {pt.bits(c): vt for c, vt in pt.vertex_data.items()}
    if len(by_bits) != 8:
        return [f"expected 8 vertices, got {len(by_bits)}"]
    for axis, name in enumerate("xyz"):
        a, b = (axis + 1) % 3, (axis + 2) % 3
        for level in (0, 1):
            total = 0
            for bits, vt in by_bits.items():
                if bits[axis] != level:
                    continue
                parity = (-1) ** (bits[a] + bits[b])
                total += 4 * vt.k[axis] - parity * vt.e[a] * vt.e[b]
            if total:
                violations.append(
                    f"kink sum rule on face {name}={'0' if level == 0 else 'L' + name}: "
                    f"4*sum = {total}"
                )
    edge_names = "xyz"
    for bits, vt in by_bits.items():
        for axis in range(3):
            if bits[axis]:
                continue
            other = list(bits)
            other[axis] = 1
            if by_bits[tuple(other)].e[axis] != vt.e[axis]:
                violations.append(
                    f"edge sign e_{edge_names[axis]} differs along edge from {bits}"
                )
    area = sum(vt.m for vt in by_bits.values())
    if area:
        violations.append(f"trapped area sum rule: sum m = {area}")
    return violations


def sweep_topologies(kmax: int, m_lo: int, m_hi: int, signs=None):
    """All realizable (e, k, m) with |k_j| <= kmax and m_lo <= m <= m_hi.

    Deterministic order: e in canonical octant order, k lexicographic, m ascending.
    """
    signs = OCTANTS if signs is None else signs
    krange = range(-kmax, kmax + 1)
    for e in signs:
        for k in itertools.product(krange, repeat=3):
            # realizable m form a single residue class mod 8
            r = (-4 * sum(k) - e.product) % 8
            start = m_lo + ((r - m_lo) % 8)
            for m in range(start, m_hi + 1, 8):
                yield VertexTopology(e, k, m)
