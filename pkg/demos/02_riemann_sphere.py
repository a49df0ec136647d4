"""Points of the extended plane on the Riemann sphere."""

# %%
import math

import numpy as np

from chordal.sphere import INFINITY, chordal, euclid3, partington_bound, stereographic

for z in (0, 1, 1j, 3 - 4j, INFINITY):
    print(f"{str(z):>8} -> {stereographic(z)}")

# %% [markdown]
# The chordal distance is the straight-line distance between projected
# points on a sphere of diameter one. It never exceeds 1.

# %%
pairs = [(0.5, 2), (0, INFINITY), (0, 1), (1j, -1j), (1e6, INFINITY)]
for a, b in pairs:
    print(f"chordal({a}, {b}) = {chordal(a, b):.6f}   chord = {euclid3(stereographic(a), stereographic(b)):.6f}")

# %% [markdown]
# A lower bound mixing the Euclidean distance, the distance of reciprocals
# and a constant cap. Pick ``a`` to trade between them.

# %%
rng = np.random.default_rng(0)
z = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
for a in (0.3, 1 / math.sqrt(2), 0.9):
    ratios = [partington_bound(u, v, a) / chordal(u, v) for u, v in z]
    print(f"a = {a:.3f}: bound / chordal = {np.round(ratios, 3)}")
