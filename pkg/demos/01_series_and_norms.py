"""Series arithmetic, norms and certified sup bounds.

Run with ``python3 demos/01_series_and_norms.py``.
"""

# %%
import numpy as np

from chordal import Series, make_grid
from chordal.bounds import min_modulus_certified, sup_norm_certified, sup_norm_torus
from chordal.series import l1_norm, lipschitz_constant, neumann_inverse

z1, z2 = Series.variable(0, 2), Series.variable(1, 2)
f = 1 - 0.4 * z1 * z2 + 0.25j * z2**3
print("f        =", f)
print("||f||_1  =", l1_norm(f))
print("L(f)     =", lipschitz_constant(f))

# %% [markdown]
# The l1 norm bounds the sup norm from above. A grid gives a certified
# interval for the sup; the torus bound is much tighter for the same grid.

# %%
grid = make_grid(2, 9, 32)
print("grid delta      :", grid.covering_radius)
print("sup (polydisc)  :", sup_norm_certified(f, grid))
print("sup (torus)     :", sup_norm_torus(f, grid))
print("min modulus     :", min_modulus_certified(f, grid))

# %% [markdown]
# ``f`` has constant term 1 and the rest has l1 norm 0.65 < 1, so its
# Neumann series converges. The residual bound is exact.

# %%
inv = neumann_inverse(f, max_terms=30)
print("terms:", inv.terms, " ratio:", inv.ratio)
print("residual bound:", inv.residual_bound)
print("actual ||f g - 1||_1:", l1_norm(f * inv.inverse - 1))

# %%
pt = np.array([0.3 + 0.1j, -0.8j])
print("f(pt) * g(pt) =", f(pt) * inv.inverse(pt))
