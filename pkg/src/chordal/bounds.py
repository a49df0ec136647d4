"""Certified enclosures of sup norms and minimum moduli over the polydisc.

All bounds come from a grid maximum (or minimum) plus a slack term that
covers the unsampled part of the polydisc; both ends are widened by a small
rounding guard.  The default slack is
``L(f) * delta`` with ``L`` from :func:`~chordal.series.lipschitz_constant`
and ``delta`` the grid covering radius.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .grid import PolydiscGrid, TorusGrid
from .series import Series, l1_norm, lipschitz_constant, rounding_guard, second_moment

#: Grid values below this count as exact zeros of the Gelfand transform.
EXACT_ZERO = 1e-14

#: Neumann ratios below this prove invertibility despite rounding in the l1 sum.
NEUMANN_SAFE = 1 - 1e-12


class Certificate(enum.Enum):
    """Three-valued outcome of a certified check."""

    PROVED = "proved"
    DISPROVED = "disproved"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


class BoundKind(enum.Enum):
    SUPREMUM = "supremum"
    INFIMUM_MODULUS = "infimum_modulus"


@dataclass(frozen=True)
class CertifiedBound:
    """Interval ``[lo, hi]`` that contains the true extremum."""

    lo: float
    hi: float
    kind: BoundKind
    grid_delta: float
    lipschitz: float
    sampled: float | None = None  # raw grid extremum before widening

    def __post_init__(self):
        for name in ("lo", "hi", "grid_delta", "lipschitz"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.sampled is not None:
            object.__setattr__(self, "sampled", float(self.sampled))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("bounds must be finite")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "kind": self.kind.value,
            "grid_delta": self.grid_delta,
            "lipschitz": self.lipschitz,
        }


def sup_norm_certified(f: Series, grid: PolydiscGrid) -> CertifiedBound:
    """Enclosure of ``||f||_inf = max over the closed polydisc of |f|``."""
    if f.is_zero():
        return CertifiedBound(0.0, 0.0, BoundKind.SUPREMUM, grid.covering_radius, 0.0)
    lip = lipschitz_constant(f)
    top, _ = grid.reduce([f], np.abs, "max")
    guard = rounding_guard(f)
    lo = max(0.0, top - guard)
    hi = top + lip * grid.covering_radius + guard
    return CertifiedBound(lo, hi, BoundKind.SUPREMUM, grid.covering_radius, lip, top)


def torus_curvature(f: Series) -> float:
    """Bound on the second directional derivative of ``|f|^2`` along the torus.

    With ``F(theta) = |f(e^{i theta})|^2 = sum a_k conj(a_l) e^{i (k-l) theta}``
    and a step ``Delta`` of max-norm ``h``, ``|F''| <= M h^2``.  Two valid
    choices of ``M`` are compared and the smaller one kept: the pairwise sum
    ``sum |a_k||a_l| |k-l|_1^2`` (exact zero for monomials) and the product
    rule bound ``2 (||f||_1 S2 + L^2)``.
    """
    if f.is_zero():
        return 0.0
    lip = lipschitz_constant(f)
    separable = 2.0 * (l1_norm(f) * second_moment(f) + lip * lip)
    if len(f) > 3000:
        return separable
    exps = np.array(list(f.terms), dtype=float)
    mods = np.abs(np.array(list(f.terms.values())))
    diff = np.abs(exps[:, None, :] - exps[None, :, :]).sum(axis=2)
    pairwise = float(np.sum(mods[:, None] * mods[None, :] * diff**2))
    return min(pairwise, separable)


def sup_norm_torus(f: Series, torus: TorusGrid | PolydiscGrid) -> CertifiedBound:
    """Enclosure of ``||f||_inf`` using the distinguished boundary only.

    A polynomial attains its maximum modulus over the closed polydisc on the
    torus.  There ``F = |f|^2`` is a smooth periodic function whose gradient
    vanishes at the maximiser, so a grid point at angular offset at most
    ``h = pi / A`` per coordinate loses at most ``M h^2 / 2`` in ``F``
    (``M`` from :func:`torus_curvature`).  This second-order slack is far
    smaller than the first-order Lipschitz slack on the full polydisc.

    Valid only for single holomorphic elements, not for ratios such as the
    chordal integrand.
    """
    if isinstance(torus, PolydiscGrid):
        torus = torus.torus()
    h = torus.half_spacing
    if f.is_zero():
        return CertifiedBound(0.0, 0.0, BoundKind.SUPREMUM, h, 0.0)
    curv = torus_curvature(f)
    sq, _ = torus.reduce([f], lambda v: v.real**2 + v.imag**2, "max")
    # squaring and the square root add a few ulps relative to |f|
    guard = rounding_guard(f) + 4 * np.finfo(float).eps * math.sqrt(sq)
    lo = max(0.0, math.sqrt(sq) - guard)
    hi = math.sqrt(sq + 0.5 * curv * h * h) + guard
    return CertifiedBound(lo, hi, BoundKind.SUPREMUM, h, curv, math.sqrt(sq))


def min_modulus_certified(f: Series, grid: PolydiscGrid) -> CertifiedBound:
    """Enclosure of ``min over the closed polydisc of |f|``."""
    lip = lipschitz_constant(f)
    bottom, _ = grid.reduce([f], np.abs, "min")
    guard = rounding_guard(f)
    hi = bottom + guard
    lo = max(0.0, bottom - lip * grid.covering_radius - guard)
    return CertifiedBound(lo, hi, BoundKind.INFIMUM_MODULUS, grid.covering_radius, lip, bottom)


def neumann_ratio(f: Series) -> float:
    """``||1 - f/f(0)||_1``, or ``inf`` when ``f(0) = 0``."""
    c0 = f.constant_term
    if c0 == 0:
        return math.inf
    return l1_norm(1 - f / c0)


def certificate_from_min(bound: CertifiedBound) -> Certificate:
    if bound.lo > 0:
        return Certificate.PROVED
    sampled = bound.hi if bound.sampled is None else bound.sampled
    if sampled < EXACT_ZERO:
        return Certificate.DISPROVED
    return Certificate.INCONCLUSIVE


def is_invertible(f: Series, grid: PolydiscGrid) -> Certificate:
    """Decide invertibility of ``f`` in the Wiener algebra of the polydisc.

    ``f`` is invertible iff its Gelfand transform has no zero on the closed
    polydisc.  PROVED when ``||1 - f/f(0)||_1 < 1`` (a convergent Neumann
    series, no grid needed) or when the certified minimum modulus is
    positive, DISPROVED when a grid value vanishes, INCONCLUSIVE otherwise
    (refine the grid to decide).
    """
    if neumann_ratio(f) < NEUMANN_SAFE:
        return Certificate.PROVED
    return certificate_from_min(min_modulus_certified(f, grid))
