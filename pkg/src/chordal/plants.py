"""Coprime-factorizable plants and the feedback-stability predicate.

A plant ``p = n / d`` over the Wiener algebra is stored through one coprime
factorization.  Coprimeness is established either by Bezout witnesses
``n x + d y = 1`` or, since an ideal that avoids every maximal ideal is the
whole algebra, by certifying that ``n`` and ``d`` have no common zero on the
closed polydisc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    BoundKind,
    Certificate,
    CertifiedBound,
    certificate_from_min,
    is_invertible,
)
from .grid import PolydiscGrid
from .series import (
    DimensionError,
    NeumannError,
    Series,
    gelfand_eval,
    l1_norm,
    lipschitz_constant,
    neumann_inverse,
    rounding_guard,
)
from .sphere import ExtendedComplex, ratio

BEZOUT_TOLERANCE = 1e-9


class PlantError(ValueError):
    """Invalid plant data."""


class BezoutError(PlantError):
    """Supplied witnesses do not satisfy ``n x + d y = 1``."""


class CoprimenessError(PlantError):
    """Coprimeness could not be certified."""

    def __init__(self, message: str, certificate: Certificate):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True, eq=False)
class CoprimePlant:
    """A plant ``num / den`` with a certified coprime factorization.

    Attributes
    ----------
    num, den : Series
        The factors.
    witnesses : (Series, Series) or None
        Bezout pair ``(x, y)`` if supplied.
    bezout_residual : float or None
        ``||num x + den y - 1||_1`` for the supplied witnesses.
    norm_floor : float
        Certified lower bound on ``sqrt(|num|^2 + |den|^2)`` over the
        closed polydisc.
    coprime_bound : CertifiedBound or None
        Enclosure of ``min (|num| + |den|)`` when coprimeness came from the
        no-common-zero check.
    """

    num: Series
    den: Series
    witnesses: tuple[Series, Series] | None
    bezout_residual: float | None
    norm_floor: float
    coprime_bound: CertifiedBound | None = None

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def __call__(self, point) -> ExtendedComplex:
        return ratio(gelfand_eval(self.num, point), gelfand_eval(self.den, point))

    def scaled(self, unit: complex, grid: PolydiscGrid | None = None) -> CoprimePlant:
        """Same plant with both factors multiplied by a nonzero constant."""
        if unit == 0:
            raise PlantError("scaling by zero")
        wit = None
        if self.witnesses is not None:
            wit = (self.witnesses[0] / unit, self.witnesses[1] / unit)
        return make_plant(self.num * unit, self.den * unit, wit, grid)


def common_zero_bound(num: Series, den: Series, grid: PolydiscGrid) -> CertifiedBound:
    """Enclosure of ``min over the polydisc of |num| + |den|``."""
    lip = lipschitz_constant(num) + lipschitz_constant(den)
    bottom, _ = grid.reduce([num, den], lambda n, d: np.abs(n) + np.abs(d), "min")
    guard = rounding_guard(num) + rounding_guard(den)
    return CertifiedBound(
        max(0.0, bottom - lip * grid.covering_radius - guard),
        bottom + guard,
        BoundKind.INFIMUM_MODULUS,
        grid.covering_radius,
        lip,
        bottom,
    )


def make_plant(
    num: Series,
    den: Series,
    witnesses: tuple[Series, Series] | None = None,
    grid: PolydiscGrid | None = None,
    bezout_tol: float = BEZOUT_TOLERANCE,
) -> CoprimePlant:
    """Validate a coprime factorization ``num / den``.

    With witnesses the Bezout residual must not exceed ``bezout_tol``.
    Without them, ``grid`` is required and the no-common-zero criterion
    must come out PROVED.

    Raises
    ------
    PlantError
        Zero denominator or dimension mismatch.
    BezoutError
        Witness residual above tolerance.
    CoprimenessError
        Common zero found (DISPROVED) or grid too coarse (INCONCLUSIVE).
    """
    if num.nvars != den.nvars:
        raise DimensionError(f"num has {num.nvars} variables, den has {den.nvars}")
    if den.is_zero():
        raise PlantError("denominator is zero")
    if witnesses is not None:
        x, y = witnesses
        if x.nvars != num.nvars or y.nvars != num.nvars:
            raise DimensionError("witnesses must match the plant's number of variables")
        residual = l1_norm(num * x + den * y - 1)
        if residual > bezout_tol:
            raise BezoutError(f"Bezout residual {residual:.3g} exceeds {bezout_tol:.3g}")
        # 1 - res <= |n x + d y| <= sqrt(|n|^2 + |d|^2) sqrt(|x|^2 + |y|^2)
        floor = (1 - residual) / math.hypot(l1_norm(x), l1_norm(y))
        return CoprimePlant(num, den, (x, y), residual, floor)
    if grid is None:
        raise PlantError("a grid is required to certify coprimeness without witnesses")
    bound = common_zero_bound(num, den, grid)
    cert = certificate_from_min(bound)
    if cert is not Certificate.PROVED:
        what = "common zero found" if cert is Certificate.DISPROVED else "grid too coarse"
        raise CoprimenessError(f"coprimeness {cert}: {what}", cert)
    # |n| + |d| <= sqrt(2) sqrt(|n|^2 + |d|^2)
    return CoprimePlant(num, den, None, None, bound.lo / math.sqrt(2), bound)


@dataclass(frozen=True)
class FractionEntry:
    """A closed-loop entry kept in fraction form ``num / den``."""

    num: Series
    den: Series

    def __call__(self, point) -> ExtendedComplex:
        return ratio(gelfand_eval(self.num, point), gelfand_eval(self.den, point))


@dataclass(frozen=True)
class ClosedLoop:
    """The closed-loop matrix ``H(p, c)`` and its stability certificate.

    ``fractions`` always holds the four entries over the common denominator
    ``d - n c``.  When stability is proved and ``d - n c`` passes the
    Neumann test, ``series`` holds truncated power series for the entries
    and ``errors`` their certified l1 distances to the exact entries.
    """

    fractions: tuple[tuple[FractionEntry, FractionEntry], tuple[FractionEntry, FractionEntry]]
    stable: Certificate
    series: tuple[tuple[Series, Series], tuple[Series, Series]] | None = None
    errors: tuple[tuple[float, float], tuple[float, float]] | None = None


def loop_denominator(p: CoprimePlant, c: Series) -> Series:
    if c.nvars != p.nvars:
        raise DimensionError(f"controller has {c.nvars} variables, plant has {p.nvars}")
    return p.den - p.num * c


def closed_loop(p: CoprimePlant, c: Series, grid: PolydiscGrid, max_terms: int = 40) -> ClosedLoop:
    """Closed loop of plant ``p`` with stable controller ``c``.

    With ``u = d - n c`` the entries are ``p/(1-pc) = n u^-1``,
    ``pc/(1-pc) = -1 + d u^-1`` (both off-diagonal places) and
    ``c/(1-pc) = c d u^-1``.
    """
    u = loop_denominator(p, c)
    n, d = p.num, p.den
    off = FractionEntry(n * c, u)
    fractions = ((FractionEntry(n, u), off), (off, FractionEntry(c * d, u)))
    stable = is_invertible(u, grid)
    if stable is not Certificate.PROVED:
        return ClosedLoop(fractions, stable)
    try:
        inv = neumann_inverse(u, max_terms)
    except NeumannError:
        return ClosedLoop(fractions, stable)
    v, e = inv.inverse, inv.error_bound
    h11, h12, h22 = n * v, d * v - 1, c * d * v
    errs = (l1_norm(n) * e, l1_norm(d) * e, l1_norm(c * d) * e)
    return ClosedLoop(
        fractions,
        stable,
        series=((h11, h12), (h12, h22)),
        errors=((errs[0], errs[1]), (errs[1], errs[2])),
    )


def is_stabilized_by(p: CoprimePlant, c: Series, grid: PolydiscGrid) -> Certificate:
    """Whether the stable controller ``c`` stabilizes ``p``.

    ``H(p, c)`` has entries in the algebra exactly when ``d - n c`` is
    invertible there, so this is :func:`is_invertible` of ``d - n c``.
    """
    return is_invertible(loop_denominator(p, c), grid)

