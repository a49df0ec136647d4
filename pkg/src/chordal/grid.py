"""Sampling of the closed polydisc (the maximal ideal space) and grid reductions.

Grids are Cartesian products of a one-dimensional sample set ``axis`` of the
closed unit disc, so a grid over ``n`` variables has ``len(axis)**n`` points
in C (row-major) order.  Polynomials are evaluated on whole blocks of the
product at once with one small matrix product per variable; the full point
list is never materialized.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .series import DimensionError, Series

#: Points per evaluation block (bounds peak memory).
BLOCK_POINTS = 1 << 20

POINT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PolydiscPoint:
    """A point of the closed polydisc, i.e. a character of the algebra."""

    coords: tuple[complex, ...]

    def __post_init__(self):
        coords = tuple(complex(z) for z in self.coords)
        for i, z in enumerate(coords):
            if abs(z) > 1 + POINT_TOLERANCE:
                raise ValueError(f"coordinate {i} has modulus {abs(z)} > 1")
        object.__setattr__(self, "coords", coords)

    @property
    def nvars(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def polydisc_distance(z: Sequence[complex], w: Sequence[complex]) -> float:
    """The max-metric ``max_i |z_i - w_i|`` used by every Lipschitz bound."""
    return max(abs(complex(a) - complex(b)) for a, b in zip(z, w))


def _threads() -> int:
    n = int(os.environ.get("CHORDAL_THREADS", "0") or 0)
    return n if n > 0 else (os.cpu_count() or 1)


@dataclass(frozen=True, eq=False)
class ProductSet:
    """Finite product set ``axis**nvars`` with blockwise evaluation."""

    nvars: int
    axis: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.axis) ** self.nvars

    @property
    def shape(self) -> tuple[int, ...]:
        return (len(self.axis),) * self.nvars

    def point(self, index: int) -> PolydiscPoint:
        idx = np.unravel_index(int(index), self.shape)
        return PolydiscPoint(tuple(self.axis[i] for i in idx))

    def points(self) -> Iterator[PolydiscPoint]:
        for i in range(len(self)):
            yield self.point(i)

    def as_array(self) -> np.ndarray:
        """All points as an ``(N, nvars)`` array; only for small sets."""
        mesh = np.meshgrid(*([self.axis] * self.nvars), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def _row_blocks(self) -> list[tuple[int, int]]:
        m = len(self.axis)
        inner = m ** (self.nvars - 1)
        rows = max(1, BLOCK_POINTS // inner)
        return [(i, min(i + rows, m)) for i in range(0, m, rows)]

    def evaluate(self, series: Sequence[Series], start: int = 0, stop: int | None = None):
        """Values of each series on rows ``start:stop`` of the first coordinate.

        Returns a list of flat complex arrays in C order over the block.
        """
        stop = len(self.axis) if stop is None else stop
        for s in series:
            if s.nvars != self.nvars:
                raise DimensionError(f"series has {s.nvars} variables, grid has {self.nvars}")
        maxdeg = max((max(s.degrees) for s in series), default=0)
        powers = self.axis[:, None] ** np.arange(maxdeg + 1)
        out = []
        for s in series:
            coeffs = s.to_dense()
            dims = coeffs.shape
            t = powers[start:stop, : dims[0]] @ coeffs.reshape(dims[0], -1)
            t = t.reshape((stop - start,) + dims[1:])
            for d in dims[1:]:
                t = np.tensordot(t, powers[:, :d], axes=([1], [1]))
            out.append(t.reshape(-1))
        return out

    def reduce(
        self,
        series: Sequence[Series],
        fn: Callable[..., np.ndarray],
        mode: str = "max",
    ) -> tuple[float, int]:
        """Max or min of ``fn(*values)`` over the set, with its flat index.

        Ties resolve to the first index in C order regardless of how the
        blocks are scheduled.
        """
        if mode not in ("max", "min"):
            raise ValueError("mode must be 'max' or 'min'")
        inner = len(self.axis) ** (self.nvars - 1)
        pick = np.argmax if mode == "max" else np.argmin

        def work(block):
            start, stop = block
            vals = np.asarray(fn(*self.evaluate(series, start, stop)), dtype=float)
            j = int(pick(vals))
            return float(vals[j]), start * inner + j

        blocks = self._row_blocks()
        nthreads = min(_threads(), len(blocks))
        if nthreads > 1:
            with ThreadPoolExecutor(nthreads) as pool:
                results = list(pool.map(work, blocks))
        else:
            results = [work(b) for b in blocks]
        best, best_idx = results[0]
        for val, idx in results[1:]:
            if (val > best) if mode == "max" else (val < best):
                best, best_idx = val, idx
        return best, best_idx


def covering_radius(radii: np.ndarray, angular_steps: int) -> float:
    """Covering radius of the polar sample set of the closed disc.

    A point ``rho * e^{i theta}`` with ``r_a <= rho <= r_b`` (consecutive
    radii) is at angular offset at most ``psi = pi / A`` from a sample
    angle, so its squared distance to the sample ``r e^{i theta_m}`` is at
    most ``g_r(rho) = rho**2 + r**2 - 2 rho r cos(psi)``.  The min of the
    two convex functions ``g_{r_a}, g_{r_b}`` attains its max over
    ``[r_a, r_b]`` at an endpoint or at their crossing
    ``rho* = (r_a + r_b) / (2 cos psi)``.  The covering radius is the square
    root of the largest such value over all rings.  In the product grid the
    max-metric covering radius equals the per-coordinate one.
    """
    c = math.cos(math.pi / angular_steps)
    worst = 0.0
    for ra, rb in zip(radii[:-1], radii[1:]):
        def g(rho, r):
            return rho * rho + r * r - 2 * rho * r * c

        cands = [min(g(ra, ra), g(ra, rb)), min(g(rb, ra), g(rb, rb))]
        cross = (ra + rb) / (2 * c)
        if ra <= cross <= rb:
            cands.append(g(cross, ra))
        worst = max(worst, *cands)
    return math.sqrt(max(worst, 0.0)) * (1 + 1e-12)


@dataclass(frozen=True, eq=False)
class PolydiscGrid(ProductSet):
    """Polar product grid on the closed polydisc with certified covering radius.

    Every point of the closed polydisc lies within max-metric distance
    ``covering_radius`` of some grid point.
    """

    radial_steps: int = 0
    angular_steps: int = 0
    covering_radius: float = 0.0

    def torus(self) -> TorusGrid:
        """Angular samples on the distinguished boundary at the same resolution."""
        return TorusGrid.make(self.nvars, self.angular_steps)

    def refine(self, factor: int) -> PolydiscGrid:
        """Grid with ``factor`` times finer spacing; contains this grid."""
        return make_grid(
            self.nvars, (self.radial_steps - 1) * factor + 1, self.angular_steps * factor
        )

    def nearest_distance(self, point: Sequence[complex]) -> float:
        """Max-metric distance from ``point`` to the nearest grid point."""
        return max(float(np.min(np.abs(self.axis - complex(z)))) for z in point)

    def describe(self) -> dict:
        return {
            "radial": self.radial_steps,
            "angular": self.angular_steps,
            "delta": self.covering_radius,
        }


@dataclass(frozen=True, eq=False)
class TorusGrid(ProductSet):
    """Equally spaced angles on each unit circle; spacing ``2 pi / A``."""

    angular_steps: int = 0

    @classmethod
    def make(cls, nvars: int, angular_steps: int) -> TorusGrid:
        if angular_steps < 4:
            raise ValueError("angular_steps must be >= 4")
        axis = np.exp(2j * np.pi * np.arange(angular_steps) / angular_steps)
        return cls(nvars=nvars, axis=axis, angular_steps=angular_steps)

    @property
    def half_spacing(self) -> float:
        """Largest angular offset (per coordinate) to the nearest sample."""
        return math.pi / self.angular_steps


def make_grid(nvars: int, radial_steps: int = 21, angular_steps: int = 126) -> PolydiscGrid:
    """Build the polar product grid of the closed polydisc.

    Radii are ``0, 1/(R-1), ..., 1`` and angles ``2 pi m / A``; the origin is
    stored once.  See :func:`covering_radius` for the certified ``delta``.

    >>> round(make_grid(2, 21, 126).covering_radius, 5)
    0.03487
    """
    if nvars < 1:
        raise ValueError("nvars must be >= 1")
    if radial_steps < 2 or angular_steps < 4:
        raise ValueError("need radial_steps >= 2 and angular_steps >= 4")
    radii = np.linspace(0.0, 1.0, radial_steps)
    angles = np.exp(2j * np.pi * np.arange(angular_steps) / angular_steps)
    axis = np.concatenate([[0j], (radii[1:, None] * angles[None, :]).ravel()])
    return PolydiscGrid(
        nvars=nvars,
        axis=axis,
        radial_steps=radial_steps,
        angular_steps=angular_steps,
        covering_radius=covering_radius(radii, angular_steps),
    )
