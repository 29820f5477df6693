"""Trapped area, unoriented area and elastic energy by adaptive quadrature."""

# %%
import math

from prism_hedgehog import (
    Configuration,
    PrismGeometry,
    QuadratureConfig,
    RationalSpec,
    VertexTopology,
    build_representative,
    energy,
    trapped_area,
    unoriented_area,
)

# %% Identity map f(w) = w: a single octant of the sphere, Omega = -pi/2.
identity = Configuration(RationalSpec())
qc = QuadratureConfig(rel_tol=1e-10)
omega = trapped_area(identity, qc)
print(f"Omega / (pi/2) = {omega.value / (math.pi / 2):.12f}  (+/- {omega.error:.1e})")

# %% Its energy on the unit cube lies between 4 pi and 4 sqrt(3) pi.
E = energy(identity, PrismGeometry(), qc).value
print(f"4 pi = {4 * math.pi:.6f} <= E = {E:.6f} <= {4 * math.sqrt(3) * math.pi:.6f}")

# %% Energy scales linearly with the prism size.
for scale in (1, 2, 4):
    geom = PrismGeometry(scale * 2.0, scale * 1.5, scale * 1.0)
    print(scale, energy(identity, geom).value)

# %% For a conformal map the unoriented and trapped areas agree; gluing in an
# antianalytic disk adds unoriented area without changing Omega.
for vt in (VertexTopology((1, 1, 1), (1, 1, 0), -9), VertexTopology((1, 1, 1), (1, 1, 0), -1)):
    cfg = build_representative(vt)
    print(vt, "Omega =", trapped_area(cfg).value, " A =", unoriented_area(cfg).value)
