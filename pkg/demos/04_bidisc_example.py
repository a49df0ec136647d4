"""The bidisc example: a nominal plant with a pole on the torus.

``p0 = z1 z2 / (z1^2 z2^2 - 1)`` is stabilized by ``c = z1 z2``. Perturbed
plants ``p_alpha = (z1 z2 - alpha) / (z1^2 z2^2 - 1)`` are certified when
their chordal distance to ``p0`` stays below the margin.
"""

# %%
from chordal import make_grid
from chordal.robustness import (
    EXAMPLE_THRESHOLD,
    example_controller,
    example_nominal,
    example_sweep,
    margin,
)

grid = make_grid(2, 13, 64)
report = margin(example_nominal(), example_controller(), grid)
print(f"k in [{report.k_bound.lo:.15f}, {report.k_bound.hi:.15f}]")
print(f"g in [{report.g_bound.lo:.15f}, {report.g_bound.hi:.15f}]  via {report.g_method}")
print(f"margin = {report.margin:.15f}")

# %% [markdown]
# A short sweep. The default CLI grid is finer; refinement is on here too.

# %%
print(f"{'alpha':>6} {'kappa_lo':>9} {'kappa_hi':>9} {'analytic':>9}  verdict / direct check")
for row in example_sweep([0.0, 0.02, 0.05, 0.2, 0.5], grid):
    print(f"{row.alpha:6.2f} {row.kappa_lower:9.5f} {row.kappa_upper:9.5f} "
          f"{row.analytic_bound:9.5f}  {row.verdict} / {row.independent_check}")
print(f"guarantee threshold |alpha| < {EXAMPLE_THRESHOLD:.5f}")
