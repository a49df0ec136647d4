"""Chordal geometry of the extended complex plane.

The extended plane is identified with the sphere of diameter 1 centred at
``(0, 0, 1/2)`` by stereographic projection from the north pole; 0 maps to
the south pole and infinity to the north pole.  The chordal distance is the
Euclidean distance between the projected points.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Union

DEFAULT_A = 1 / math.sqrt(2)


class _Infinity:
    """The point at infinity of the extended complex plane."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

ExtendedComplex = Union[complex, _Infinity]


def is_infinite(z: ExtendedComplex) -> bool:
    return z is INFINITY


def extended(z) -> ExtendedComplex:
    """Coerce to an extended complex number; IEEE infinities map to INFINITY."""
    if z is INFINITY:
        return z
    z = complex(z)
    if math.isinf(z.real) or math.isinf(z.imag):
        return INFINITY
    if math.isnan(z.real) or math.isnan(z.imag):
        raise ValueError("NaN is not an extended complex number")
    return z


def ratio(num: complex, den: complex) -> ExtendedComplex:
    """``num / den`` with ``x / 0 = INFINITY`` for ``x != 0``."""
    if den == 0:
        if num == 0:
            raise ZeroDivisionError("0/0 is undefined")
        return INFINITY
    return num / den


def invert(z: ExtendedComplex) -> ExtendedComplex:
    if z is INFINITY:
        return 0j
    return INFINITY if z == 0 else 1 / z


class SpherePoint(NamedTuple):
    x: float
    y: float
    h: float


def stereographic(z: ExtendedComplex) -> SpherePoint:
    """Project onto the diameter-1 Riemann sphere.

    >>> stereographic(1)
    SpherePoint(x=0.5, y=0.0, h=0.5)
    """
    z = extended(z)
    if z is INFINITY:
        return SpherePoint(0.0, 0.0, 1.0)
    m = abs(z)
    if m > 1e150:
        # avoid overflow in |z|^2; same formulas divided through by |z|^2
        w = 1 / z
        s = 1 + abs(w) ** 2
        return SpherePoint(w.real / s, -w.imag / s, 1 / s)
    s = 1 + m * m
    return SpherePoint(z.real / s, z.imag / s, m * m / s)


def euclid3(p: SpherePoint, q: SpherePoint) -> float:
    return math.sqrt((p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.h - q.h) ** 2)


def chordal(z1: ExtendedComplex, z2: ExtendedComplex) -> float:
    """Chordal distance ``|z1 - z2| / (sqrt(1 + |z1|^2) sqrt(1 + |z2|^2))``.

    Extended to infinity by ``chordal(z, INFINITY) = 1 / sqrt(1 + |z|^2)``.
    Values lie in ``[0, 1]``.
    """
    z1, z2 = extended(z1), extended(z2)
    if z1 is INFINITY and z2 is INFINITY:
        return 0.0
    if z1 is INFINITY:
        z1, z2 = z2, z1
    if z2 is INFINITY:
        return 1 / math.hypot(1.0, abs(z1))
    return abs(z1 - z2) / (math.hypot(1.0, abs(z1)) * math.hypot(1.0, abs(z2)))


def partington_bound(z1: complex, z2: complex, a: float = DEFAULT_A) -> float:
    """Lower bound on ``chordal(z1, z2)`` for finite ``z1, z2`` and ``0 < a < 1``.

    Returns ``min{c |z1 - z2|, c |1/z1 - 1/z2|, (1 - a^2)/(1 + a^2)}`` with
    ``c = a^2 / (1 + a^2)``.  The reciprocal term is dropped when
    ``z1 = z2 = 0`` and is infinite when exactly one of them is 0.
    """
    if not 0 < a < 1:
        raise ValueError(f"a must lie in (0, 1), got {a}")
    z1, z2 = complex(z1), complex(z2)
    coef = a * a / (1 + a * a)
    cap = (1 - a * a) / (1 + a * a)
    if z1 == 0 or z2 == 0:
        recip = math.inf
    else:
        recip = coef * abs(1 / z1 - 1 / z2)
    return min(coef * abs(z1 - z2), recip, cap)
