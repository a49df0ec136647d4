"""Finitely supported power series in several complex variables.

A :class:`Series` is a polynomial ``sum_k a_k z^k`` stored as a sparse map
from exponent multi-indices to complex coefficients.  Polynomials are dense
in the Wiener algebra of the polydisc and closed under ``+`` and ``*``, which
makes them a convenient computational stand-in for ring elements: the
l1 norm is an exact finite sum and Gelfand evaluation is polynomial
evaluation on the closed polydisc.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np
from scipy import signal

#: Coefficients smaller than this (in modulus) are dropped on construction.
ZERO_THRESHOLD = 1e-15

Exponent = tuple[int, ...]


class DimensionError(ValueError):
    """Operands live in polydiscs of different dimension."""


class NeumannError(ValueError):
    """The element does not satisfy the Neumann contraction condition."""


def _canonical(terms: Mapping[Sequence[int], complex], nvars: int) -> dict[Exponent, complex]:
    out: dict[Exponent, complex] = {}
    for exp, coef in terms.items():
        exp = tuple(int(e) for e in exp)
        if len(exp) != nvars:
            raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
        if any(e < 0 for e in exp):
            raise ValueError(f"exponent {exp} has a negative entry")
        coef = complex(coef)
        if not (math.isfinite(coef.real) and math.isfinite(coef.imag)):
            raise ValueError(f"coefficient of {exp} is not finite")
        out[exp] = out.get(exp, 0j) + coef
    return {e: c for e, c in sorted(out.items()) if abs(c) >= ZERO_THRESHOLD}


@dataclass(frozen=True, eq=False)
class Series:
    """Sparse multivariate polynomial with complex coefficients.

    Parameters
    ----------
    nvars : int
        Number of complex variables.
    terms : mapping
        Exponent tuple -> coefficient.  Zero (and near-zero) coefficients
        are dropped and the map is frozen.

    Examples
    --------
    >>> w = Series.monomial((1, 1))
    >>> (w * w - 1).terms
    mappingproxy({(0, 0): (-1+0j), (2, 2): (1+0j)})
    """

    nvars: int
    terms: Mapping[Exponent, complex]

    # keep numpy scalars from broadcasting over a Series
    __array_ufunc__ = None

    def __post_init__(self):
        if int(self.nvars) < 1:
            raise ValueError("nvars must be a positive integer")
        object.__setattr__(self, "nvars", int(self.nvars))
        object.__setattr__(
            self, "terms", MappingProxyType(_canonical(self.terms, self.nvars))
        )

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Series:
        return cls(nvars, {})

    @classmethod
    def constant(cls, value: complex, nvars: int = 2) -> Series:
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, exp: Sequence[int], coef: complex = 1.0) -> Series:
        return cls(len(exp), {tuple(exp): coef})

    @classmethod
    def variable(cls, index: int, nvars: int) -> Series:
        """The coordinate function ``z_index`` (0-based)."""
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): 1.0})

    @classmethod
    def from_dense(cls, coeffs: np.ndarray) -> Series:
        coeffs = np.asarray(coeffs, dtype=complex)
        idx = np.argwhere(np.abs(coeffs) >= ZERO_THRESHOLD)
        return cls(coeffs.ndim, {tuple(int(i) for i in k): coeffs[tuple(k)] for k in idx})

    # -- basic queries ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> Exponent:
        """Largest exponent per variable (zeros for the zero series)."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(int(d) for d in np.max(np.array(list(self.terms)), axis=0))

    def coefficient(self, exp: Sequence[int]) -> complex:
        return self.terms.get(tuple(exp), 0j)

    @property
    def constant_term(self) -> complex:
        return self.coefficient((0,) * self.nvars)

    def to_dense(self) -> np.ndarray:
        """Coefficient tensor of shape ``degrees + 1``."""
        arr = np.zeros(tuple(d + 1 for d in self.degrees), dtype=complex)
        for exp, coef in self.terms.items():
            arr[exp] = coef
        return arr

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> Series:
        if isinstance(other, Series):
            if other.nvars != self.nvars:
                raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Series.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other) -> Series:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        merged = dict(self.terms)
        for exp, coef in other.terms.items():
            merged[exp] = merged.get(exp, 0j) + coef
        return Series(self.nvars, merged)

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Series:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Series:
        return (-self) + other

    def __mul__(self, other) -> Series:
        if isinstance(other, (int, float, complex, np.number)):
            return Series(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Series.zero(self.nvars)
        if len(self) == 1 or len(other) == 1:
            out: dict[Exponent, complex] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, 0j) + c1 * c2
            return Series(self.nvars, out)
        prod = signal.convolve(self.to_dense(), other.to_dense(), method="direct")
        return Series.from_dense(prod)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Series:
        if not isinstance(other, (int, float, complex, np.number)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division of a series by zero")
        return self * (1 / other)

    def __pow__(self, n: int) -> Series:
        if n < 0:
            raise ValueError("negative powers are not ring operations")
        result, base = Series.constant(1.0, self.nvars), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.nvars == other.nvars and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(self.terms.items())))

    def __call__(self, point) -> complex:
        return gelfand_eval(self, point)

    def __repr__(self) -> str:
        if not self.terms:
            return f"Series(nvars={self.nvars}, 0)"
        parts = []
        for exp, coef in self.terms.items():
            mono = "*".join(
                f"z{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exp) if e
            )
            parts.append(f"({coef:.6g})" + (f"*{mono}" if mono else ""))
        return f"Series(nvars={self.nvars}, " + " + ".join(parts) + ")"


def series_add(a: Series, b: Series) -> Series:
    return a + b


def series_mul(a: Series, b: Series) -> Series:
    return a * b


def l1_norm(f: Series) -> float:
    """Sum of coefficient moduli (the Wiener-algebra norm)."""
    return float(math.fsum(abs(c) for c in f.terms.values()))


def lipschitz_constant(f: Series) -> float:
    """Lipschitz constant of ``f`` on the closed polydisc.

    Returns ``sum_k |a_k| * (k_1 + ... + k_n)``; for every ``z, w`` in the
    closed polydisc, ``|f(z) - f(w)| <= L * max_i |z_i - w_i|``.
    """
    return float(math.fsum(abs(c) * sum(e) for e, c in f.terms.items()))


def second_moment(f: Series) -> float:
    """``sum_k |a_k| * |k|_1**2``; bounds second derivatives along the torus."""
    return float(math.fsum(abs(c) * sum(e) ** 2 for e, c in f.terms.items()))


def gelfand_eval(f: Series, point) -> complex:
    """Evaluate ``f`` at a point of the closed polydisc.

    For the Wiener algebra of the polydisc every character is evaluation at
    a point of the closed polydisc, so the Gelfand transform is ordinary
    polynomial evaluation.
    """
    coords = tuple(getattr(point, "coords", point))
    if len(coords) != f.nvars:
        raise DimensionError(f"point has dimension {len(coords)}, series has {f.nvars}")
    total = 0j
    for exp, coef in f.terms.items():
        term = coef
        for z, e in zip(coords, exp):
            if e:
                term *= complex(z) ** e
        total += term
    return total


def evaluate_points(f: Series, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at an ``(m, nvars)`` array of points."""
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    if points.shape[1] != f.nvars:
        raise DimensionError(f"points have dimension {points.shape[1]}, series has {f.nvars}")
    out = np.zeros(points.shape[0], dtype=complex)
    for exp, coef in f.terms.items():
        term = np.full(points.shape[0], coef, dtype=complex)
        for i, e in enumerate(exp):
            if e:
                term *= points[:, i] ** e
        out += term
    return out


def rounding_guard(f: Series) -> float:
    """Absolute floating-point slack added to certified upper bounds."""
    if len(f) <= 1:
        return 4 * np.finfo(float).eps * lipschitz_constant(f)
    return 4 * np.finfo(float).eps * (lipschitz_constant(f) + len(f) * l1_norm(f))


@dataclass(frozen=True)
class NeumannInverse:
    """Truncated Neumann inverse of ``f`` and its certified error terms.

    Attributes
    ----------
    inverse : Series
        ``g = f(0)^{-1} * sum_{j<=N} q^j`` with ``q = 1 - f / f(0)``.
    ratio : float
        ``r = ||q||_1 < 1``.
    residual_bound : float
        ``||f*g - 1||_1 <= r**(N+1)`` (since ``f*g - 1 = -q**(N+1)``).
    error_bound : float
        ``||f^{-1} - g||_1 <= r**(N+1) / ((1 - r) |f(0)|)``.
    """

    inverse: Series
    terms: int
    ratio: float
    residual_bound: float
    error_bound: float


def neumann_inverse(f: Series, max_terms: int = 40) -> NeumannInverse:
    """Approximate ``1/f`` by a Neumann series centred at the constant term.

    Raises
    ------
    NeumannError
        If ``f(0) == 0`` or ``||1 - f/f(0)||_1 >= 1``.  ``f`` may still be
        invertible; use :func:`chordal.bounds.is_invertible` for yes/no.
    """
    if max_terms < 0:
        raise ValueError("max_terms must be nonnegative")
    c0 = f.constant_term
    if abs(c0) < ZERO_THRESHOLD:
        raise NeumannError("constant term vanishes; not Neumann-invertible")
    q = 1 - f / c0
    r = l1_norm(q)
    if r >= 1:
        raise NeumannError(f"||1 - f/f(0)||_1 = {r:.6g} >= 1; not Neumann-invertible")
    acc = Series.constant(1.0, f.nvars)
    for _ in range(max_terms):
        acc = 1 + q * acc
    tail = r ** (max_terms + 1)
    return NeumannInverse(
        inverse=acc / c0,
        terms=max_terms,
        ratio=r,
        residual_bound=tail,
        error_bound=tail / ((1 - r) * abs(c0)),
    )


def random_series(
    rng: np.random.Generator,
    nvars: int,
    max_degree: int = 3,
    nterms: int | None = None,
    scale: float = 1.0,
) -> Series:
    """Random polynomial with complex normal coefficients, for tests and demos."""
    shape = (max_degree + 1,) * nvars
    size = int(np.prod(shape))
    nterms = size if nterms is None else min(nterms, size)
    flat = rng.choice(size, size=nterms, replace=False)
    coefs = scale * (rng.standard_normal(nterms) + 1j * rng.standard_normal(nterms))
    return Series(nvars, {np.unravel_index(i, shape): c for i, c in zip(flat, coefs)})

