"""Chordal distance between two plants over the bidisc."""

# %%
from chordal import make_grid
from chordal.metric import kappa, kappa_pointwise
from chordal.plants import make_plant
from chordal.series import Series

z1, z2 = Series.variable(0, 2), Series.variable(1, 2)
grid = make_grid(2, 9, 32)

# %% [markdown]
# Without Bezout witnesses, coprimeness is certified by showing that
# ``|n| + |d|`` has no zero on the bidisc.

# %%
p = make_plant(z1 + 0.2, 2 - z2, grid=grid)
q = make_plant(z1 + 0.25, 2 - z2 + 0.1 * z1 * z2, grid=grid)
print("norm floors:", p.norm_floor, q.norm_floor)

# %%
est = kappa(p, q, grid)
print(f"kappa in [{est.lower:.5f}, {est.upper:.5f}] at {est.argmax_point}")
print("value at the argmax:", kappa_pointwise(p, q, est.argmax_point.coords))

# %% [markdown]
# Refining the grid shrinks the Lipschitz slack.

# %%
for factor in (2, 4):
    fine = grid.refine(factor)
    e = kappa(p, q, fine)
    print(f"x{factor}: delta {fine.covering_radius:.4f}  kappa in [{e.lower:.5f}, {e.upper:.5f}]")
