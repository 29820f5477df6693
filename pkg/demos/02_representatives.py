"""Explicit representative configurations on the quarter disk.

Conformal topologies get a rational function, anticonformal ones its complex
conjugate, and nonconformal ones a glued field with an antianalytic disk.
"""

# %%
import numpy as np

from prism_hedgehog import (
    VertexTopology,
    build_representative,
    check_tangent_bc,
    config_invariants,
    evaluate,
)

# %% A Case 1b topology: one real and one imaginary zero/pole pair.
vt = VertexTopology((1, 1, 1), (1, 1, 0), -9)
cfg = build_representative(vt)
print(cfg.base)
print("formula invariants:", config_invariants(cfg))

# %% Evaluation returns a projective pair and both Wirtinger derivatives.
jet = evaluate(cfg, 0.3 + 0.4j)
print("f =", jet.scalar, " df/dw =", jet.dw, " df/dwbar =", jet.dwbar)

# %% Tangent boundary conditions: real on [0,1], imaginary on i[0,1],
# unimodular on the arc.
print(check_tangent_bc(cfg))

# %% A topology whose distinguished axis is not z is built on a rotated
# topology and wrapped in Moebius rotations.
rotated = build_representative(VertexTopology((1, 1, 1), (0, 1, 1), -9))
print("rotations:", rotated.rotations, config_invariants(rotated))

# %% The nonconformal worked example glues W = 1 antianalytic sheets.
glued = build_representative(VertexTopology((1, 1, 1), (1, 1, 0), -1))
g = glued.glue
print(f"glue at w0 = {g.w0:.4f}, eps = {g.eps:.4f}, W = {g.W}")
ring = g.w0 + 1.5 * g.eps * np.exp(1j * np.linspace(0, 2 * np.pi, 5)[:-1])
for w in ring:
    j = evaluate(glued, w)
    print(f"  |df/dw| = {abs(j.dw):.3f}   |df/dwbar| = {abs(j.dwbar):.3f}")
