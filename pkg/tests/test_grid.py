import math

import numpy as np
import pytest

from chordal.grid import PolydiscPoint, make_grid, polydisc_distance
from chordal.series import Series, evaluate_points

from conftest import random_polydisc_points


def brute_nearest(grid, pts):
    """Distance to the nearest point of the full product grid, enumerated."""
    allpts = grid.as_array()
    best = np.full(len(pts), np.inf)
    for chunk in np.array_split(allpts, max(1, len(allpts) // 2000)):
        d = np.max(np.abs(pts[:, None, :] - chunk[None, :, :]), axis=2)
        best = np.minimum(best, d.min(axis=1))
    return best


def test_coarsest_grid():
    g = make_grid(1, 2, 4)
    pts = {complex(round(z.real, 12), round(z.imag, 12)) for z in g.axis}
    assert pts == {0, 1, 1j, -1, -1j}
    assert g.covering_radius <= 1


def test_default_resolution_delta():
    g = make_grid(2, 21, 126)
    assert g.covering_radius <= 0.035
    # outermost annular cell, worst point at rho = (ra + rb) / (2 cos psi)
    c = math.cos(math.pi / 126)
    rho = 1.95 / (2 * c)
    assert g.covering_radius == pytest.approx(math.sqrt(rho**2 + 0.95**2 - 2 * rho * 0.95 * c), rel=1e-9)


@pytest.mark.parametrize("radial,angular", [(2, 4), (3, 6), (5, 12), (9, 32)])
def test_covering_radius_sampling_oracle(rng, radial, angular):
    g = make_grid(2, radial, angular)
    pts = random_polydisc_points(rng, 200_000 // radial**2, 2)
    d = brute_nearest(g, pts)
    assert np.all(d <= g.covering_radius)
    # the bound is tight: some sample lands close to the worst case
    assert d.max() >= 0.6 * g.covering_radius


def test_covering_radius_is_tight_in_1d(rng):
    g = make_grid(1, 5, 12)
    r = np.linspace(0, 1, 801)[:, None]
    t = np.linspace(0, 2 * np.pi, 2401)[None, :]
    pts = (r * np.exp(1j * t)).reshape(-1, 1)
    d = np.min(np.abs(pts - g.axis[None, :]), axis=1)
    assert d.max() <= g.covering_radius
    assert d.max() >= 0.999 * g.covering_radius


def test_nearest_distance_matches_enumeration(rng):
    g = make_grid(2, 4, 8)
    pts = random_polydisc_points(rng, 200, 2)
    brute = brute_nearest(g, pts)
    fast = np.array([g.nearest_distance(p) for p in pts])
    assert np.allclose(brute, fast, atol=1e-15)


def test_refine_contains_coarse():
    g = make_grid(1, 5, 12)
    f = g.refine(2)
    assert (f.radial_steps, f.angular_steps) == (9, 24)
    for z in g.axis:
        assert np.min(np.abs(f.axis - z)) < 1e-14
    assert f.covering_radius < g.covering_radius


def test_blockwise_evaluation_matches_direct(rng):
    g = make_grid(2, 5, 8)
    f = Series(2, {(0, 0): 1, (2, 1): 0.5j, (0, 3): -0.2})
    direct = evaluate_points(f, g.as_array())
    (vals,) = g.evaluate([f])
    assert np.allclose(vals, direct, atol=1e-13)
    i = 123
    assert np.allclose(g.point(i).coords, g.as_array()[i])


def test_reduce_tie_breaks_to_first_index():
    g = make_grid(2, 3, 4)
    val, idx = g.reduce([Series.constant(1.0)], np.abs, "max")
    assert (val, idx) == (1.0, 0)


def test_reduce_is_partition_independent(monkeypatch):
    import chordal.grid as grid_mod

    g = make_grid(2, 6, 16)
    f = Series(2, {(1, 0): 1, (0, 1): 1j, (1, 1): -0.5})
    ref = g.reduce([f], np.abs, "max")
    monkeypatch.setattr(grid_mod, "BLOCK_POINTS", 97)
    monkeypatch.setenv("CHORDAL_THREADS", "3")
    assert g.reduce([f], np.abs, "max") == ref


def test_point_validation():
    with pytest.raises(ValueError):
        PolydiscPoint((1.1, 0))
    PolydiscPoint((1 + 1e-13, 0))
    assert polydisc_distance((0, 1), (0.5, 1j)) == pytest.approx(math.sqrt(2))


def test_degenerate_resolution():
    with pytest.raises(ValueError):
        make_grid(2, 1, 8)
    with pytest.raises(ValueError):
        make_grid(2, 5, 3)
