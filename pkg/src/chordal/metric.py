"""The chordal distance between coprime-factorizable plants.

For plants ``p_i = n_i / d_i`` the distance is the supremum over the closed
polydisc of

    |n1 d2 - n2 d1| / (sqrt(|n1|^2 + |d1|^2) sqrt(|n2|^2 + |d2|^2)),

which is the pointwise chordal distance between ``p1(z)`` and ``p2(z)`` on
the Riemann sphere and does not depend on the chosen factorizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import PolydiscGrid, PolydiscPoint
from .plants import CoprimePlant
from .series import DimensionError, Series, evaluate_points, gelfand_eval, l1_norm, lipschitz_constant

#: Both factors of one plant below this at a point means they share a zero.
COPRIME_FLOOR = 1e-14

#: Absolute allowance for rounding in the evaluated integrand.
ROUNDING_SLACK = 1e-13


class CoprimenessViolation(ArithmeticError):
    """Numerator and denominator vanish together at a spectrum point."""


def _check_dims(p1: CoprimePlant, p2: CoprimePlant) -> None:
    if p1.nvars != p2.nvars:
        raise DimensionError(f"plants have {p1.nvars} and {p2.nvars} variables")


def chordal_integrand(n1, d1, n2, d2) -> np.ndarray:
    """Pointwise chordal distance from factor values (vectorized)."""
    s1 = np.hypot(np.abs(n1), np.abs(d1))
    s2 = np.hypot(np.abs(n2), np.abs(d2))
    if np.any(s1 < COPRIME_FLOOR) or np.any(s2 < COPRIME_FLOOR):
        raise CoprimenessViolation("numerator and denominator vanish at the same point")
    return np.abs(n1 * d2 - n2 * d1) / (s1 * s2)


def kappa_pointwise(p1: CoprimePlant, p2: CoprimePlant, point) -> float:
    _check_dims(p1, p2)
    vals = [gelfand_eval(s, point) for s in (p1.num, p1.den, p2.num, p2.den)]
    return float(chordal_integrand(*(np.asarray(v) for v in vals)))


def kappa_sampled_only(p1: CoprimePlant, p2: CoprimePlant, points: Sequence) -> float:
    """Max of the integrand over explicit points; a lower estimate of kappa."""
    _check_dims(p1, p2)
    pts = np.array([tuple(getattr(p, "coords", p)) for p in points], dtype=complex)
    if pts.size == 0:
        raise ValueError("no sample points given")
    pts = pts.reshape(len(points), -1)
    vals = [evaluate_points(s, pts) for s in (p1.num, p1.den, p2.num, p2.den)]
    return float(np.max(chordal_integrand(*vals)))


def cross_numerator(p1: CoprimePlant, p2: CoprimePlant) -> Series:
    return p1.num * p2.den - p2.num * p1.den


def ratio_lipschitz(p1: CoprimePlant, p2: CoprimePlant) -> float:
    """Lipschitz constant of the chordal integrand on the polydisc.

    With ``N = n1 d2 - n2 d1``, ``D_i = sqrt(|n_i|^2 + |d_i|^2) >= beta_i``
    (the plants' certified norm floors) and ``L(D_i) <= L(n_i) + L(d_i)``,
    the quotient rule gives

        L(N) / (b1 b2) + ||N||_1 ((L(n1)+L(d1)) / (b1^2 b2) + (L(n2)+L(d2)) / (b1 b2^2)).
    """
    big_n = cross_numerator(p1, p2)
    b1, b2 = p1.norm_floor, p2.norm_floor
    l1 = lipschitz_constant(p1.num) + lipschitz_constant(p1.den)
    l2 = lipschitz_constant(p2.num) + lipschitz_constant(p2.den)
    return lipschitz_constant(big_n) / (b1 * b2) + l1_norm(big_n) * (
        l1 / (b1 * b1 * b2) + l2 / (b1 * b2 * b2)
    )


@dataclass(frozen=True)
class KappaEstimate:
    """Certified enclosure ``lower <= kappa <= upper``."""

    lower: float
    upper: float
    grid_delta: float
    argmax_point: PolydiscPoint
    lipschitz: float

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "grid_delta": self.grid_delta,
            "lipschitz": self.lipschitz,
            "argmax": [[z.real, z.imag] for z in self.argmax_point.coords],
        }


def kappa(p1: CoprimePlant, p2: CoprimePlant, grid: PolydiscGrid) -> KappaEstimate:
    """Grid maximum of the integrand plus a certified Lipschitz slack.

    ``upper - lower == lipschitz * grid_delta`` (plus a 1e-13 rounding
    allowance) unless ``upper`` was clamped to 1, the largest possible
    chordal distance.
    """
    _check_dims(p1, p2)
    series = [p1.num, p1.den, p2.num, p2.den]
    lower, idx = grid.reduce(series, chordal_integrand, "max")
    lower = min(max(lower, 0.0), 1.0)
    lip = ratio_lipschitz(p1, p2)
    upper = lower + lip * grid.covering_radius
    if lip > 0:
        upper += ROUNDING_SLACK
    upper = min(upper, 1.0)
    return KappaEstimate(lower, upper, grid.covering_radius, grid.point(idx), lip)
