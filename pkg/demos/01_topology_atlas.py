"""Vertex topologies, wrapping numbers and classification.

A vertex of the prism carries edge signs e, kink numbers k and a trapped
area m * pi/2.  Everything in this demo is exact integer arithmetic.
"""

# %%
from collections import Counter

from prism_hedgehog import (
    Kind,
    VertexTopology,
    classify,
    conjugate_topology,
    is_realizable,
    omega_chi,
    sweep_topologies,
    wrapping_numbers,
)

# %% The radial hedgehog n = r/|r| has e = (+,+,+), k = 0 and m = -1.
hedgehog = VertexTopology((1, 1, 1), (0, 0, 0), -1)
print(hedgehog, classify(hedgehog))
print(wrapping_numbers(hedgehog).as_dict())

# %% Not every triple is realizable: m must sit in the right residue mod 8.
print(is_realizable(VertexTopology((1, 1, 1), (0, 0, 0), 1)))

# %% Wrapping numbers of mixed sign make a topology nonconformal.
nonconformal = VertexTopology((1, 1, 1), (1, 1, 0), -1)
w = wrapping_numbers(nonconformal)
print(w.as_dict(), "sum |w| =", w.sum_abs)
print("conformal iff m <=", -omega_chi(nonconformal.e, nonconformal.k, -1))

# %% Conjugation swaps conformal and anticonformal classes.
print(conjugate_topology(hedgehog), classify(conjugate_topology(hedgehog)).kind)

# %% Class census over a small window.
census = Counter(classify(vt).kind for vt in sweep_topologies(2, -17, 17))
for kind in Kind:
    print(f"{kind.value:>14}: {census[kind]}")
