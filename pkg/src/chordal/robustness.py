"""Robustness margin for strong stabilization and its certification.

If a stable controller ``c`` stabilizes ``p0`` with ``g0 = p0 / (1 - c p0)``,
``k = ||c||_inf`` and ``g = ||g0||_inf``, then ``c`` stabilizes every plant
``p`` with

    kappa(p, p0) < (1/3) min{1, 1/g, 1/(k (1 + k g))}.

Here ``k`` and ``g`` enter as certified upper bounds and ``kappa`` as a
certified upper bound, so a CERTIFIED_STABLE verdict is sound.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bounds import (
    BoundKind,
    Certificate,
    CertifiedBound,
    min_modulus_certified,
    sup_norm_torus,
)
from .grid import PolydiscGrid
from .metric import KappaEstimate, kappa
from .plants import (
    CoprimePlant,
    CoprimenessError,
    is_stabilized_by,
    loop_denominator,
    make_plant,
)
from .series import (
    NeumannError,
    Series,
    l1_norm,
    lipschitz_constant,
    neumann_inverse,
    random_series,
    rounding_guard,
)

log = logging.getLogger(__name__)

#: Guarantee threshold on |alpha| for the bidisc example family.
EXAMPLE_THRESHOLD = 1 / (4 * math.sqrt(3))
EXAMPLE_MARGIN = 1 / 6

DEFAULT_REFINEMENTS = (2, 4)


class Verdict(enum.Enum):
    CERTIFIED_STABLE = "certified_stable"
    NOT_CERTIFIED = "not_certified"

    def __str__(self):
        return self.value


class NotStabilizedError(ValueError):
    """The controller is not certified to stabilize the nominal plant."""

    def __init__(self, message: str, certificate: Certificate):
        super().__init__(message)
        self.certificate = certificate


def margin_formula(k: float, g: float) -> float:
    """``(1/3) min{1, 1/g, 1/(k (1 + k g))}``; terms with ``g = 0`` or ``k = 0`` drop out."""
    if k < 0 or g < 0:
        raise ValueError("k and g are norms and must be nonnegative")
    terms = [1.0]
    if g > 0:
        terms.append(1.0 / g)
    if k > 0:
        terms.append(1.0 / (k * (1.0 + k * g)))
    return min(terms) / 3.0


@dataclass(frozen=True)
class MarginReport:
    k: float
    g: float
    margin: float
    stabilizes_nominal: Certificate
    grid_delta: float
    k_bound: CertifiedBound
    g_bound: CertifiedBound
    g_method: str

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "g": self.g,
            "margin": self.margin,
            "stabilizes_nominal": str(self.stabilizes_nominal),
            "grid_delta": self.grid_delta,
            "k_bound": self.k_bound.to_dict(),
            "g_bound": self.g_bound.to_dict(),
            "g_method": self.g_method,
        }


def _neumann_terms(u: Series, scale: float, tol: float, cap: int) -> int | None:
    c0 = u.constant_term
    if c0 == 0:
        return None
    r = l1_norm(1 - u / c0)
    if r >= 1:
        return None
    if r == 0:
        return 0
    need = math.log(tol * (1 - r) * abs(c0) / max(scale, 1e-300)) / math.log(r)
    need = max(0, math.ceil(need))
    return need if need <= cap else None


def loop_gain_bound(
    p0: CoprimePlant, c: Series, grid: PolydiscGrid, tol: float = 1e-10, max_terms: int = 60
) -> tuple[CertifiedBound, str]:
    """Enclosure of ``g = sup |n0 / (d0 - n0 c)|`` over the polydisc.

    Preferred route: materialize ``g0 = n0 (d0 - n0 c)^{-1}`` by a Neumann
    series, bound its sup on the torus and widen by ``||n0||_1`` times the
    truncation error.  Fallback: grid maximum of the ratio with the
    quotient-rule Lipschitz slack ``L(n0)/m + ||n0||_1 L(u)/m^2``, where
    ``m`` is the certified min modulus of ``u = d0 - n0 c``.
    """
    n0 = p0.num
    u = loop_denominator(p0, c)
    if n0.is_zero():
        return CertifiedBound(0.0, 0.0, BoundKind.SUPREMUM, grid.covering_radius, 0.0), "zero"
    terms = _neumann_terms(u, l1_norm(n0), tol, max_terms)
    if terms is not None:
        try:
            inv = neumann_inverse(u, terms)
        except NeumannError:  # pragma: no cover - guarded by _neumann_terms
            inv = None
        if inv is not None:
            err = l1_norm(n0) * inv.error_bound
            b = sup_norm_torus(n0 * inv.inverse, grid.torus())
            bound = CertifiedBound(
                max(0.0, b.lo - err), b.hi + err, BoundKind.SUPREMUM, b.grid_delta, b.lipschitz
            )
            return bound, "neumann-torus"
    m = min_modulus_certified(u, grid).lo
    if m <= 0:
        raise NotStabilizedError("loop denominator not certified invertible", Certificate.INCONCLUSIVE)
    lip = lipschitz_constant(n0) / m + l1_norm(n0) * lipschitz_constant(u) / (m * m)
    lo, _ = grid.reduce([n0, u], lambda a, b: np.abs(a) / np.abs(b), "max")
    hi = lo + lip * grid.covering_radius + (rounding_guard(n0) + rounding_guard(u)) / m
    return CertifiedBound(lo, hi, BoundKind.SUPREMUM, grid.covering_radius, lip), "ratio-lipschitz"


def margin(p0: CoprimePlant, c: Series, grid: PolydiscGrid) -> MarginReport:
    """Certified lower bound on the robustness radius around ``p0``.

    Raises
    ------
    NotStabilizedError
        If ``c`` is not certified to stabilize ``p0`` on this grid.
    """
    stab = is_stabilized_by(p0, c, grid)
    if stab is not Certificate.PROVED:
        raise NotStabilizedError(f"nominal stabilization {stab}", stab)
    k_bound = sup_norm_torus(c, grid.torus())
    g_bound, method = loop_gain_bound(p0, c, grid)
    return MarginReport(
        k=k_bound.hi,
        g=g_bound.hi,
        margin=margin_formula(k_bound.hi, g_bound.hi),
        stabilizes_nominal=stab,
        grid_delta=grid.covering_radius,
        k_bound=k_bound,
        g_bound=g_bound,
        g_method=method,
    )


@dataclass(frozen=True)
class RobustnessCertificate:
    kappa: KappaEstimate
    margin: float
    verdict: Verdict
    independent_check: Certificate
    grid: PolydiscGrid
    margin_report: MarginReport
    refinements: tuple[int, ...] = ()

    @property
    def kappa_upper(self) -> float:
        return self.kappa.upper

    @property
    def kappa_lower(self) -> float:
        return self.kappa.lower

    def to_dict(self) -> dict:
        """Report in the documented JSON layout."""
        return {
            "k": self.margin_report.k,
            "g": self.margin_report.g,
            "margin": self.margin,
            "kappa_lower": self.kappa.lower,
            "kappa_upper": self.kappa.upper,
            "verdict": str(self.verdict),
            "independent_check": str(self.independent_check),
            "grid": self.grid.describe(),
        }


def _verdict(est: KappaEstimate, margin_value: float) -> Verdict:
    return Verdict.CERTIFIED_STABLE if est.upper < margin_value else Verdict.NOT_CERTIFIED


def certify(
    p: CoprimePlant,
    p0: CoprimePlant,
    c: Series,
    grid: PolydiscGrid,
    refine: Sequence[int] = (),
    margin_report: MarginReport | None = None,
) -> RobustnessCertificate:
    """Certify that ``c`` stabilizes ``p`` because ``p`` is close to ``p0``.

    ``refine`` lists grid refinement factors tried, in order, while the
    verdict is NOT_CERTIFIED.  A factor is skipped when even the current
    lower estimate plus the slack at the finer spacing reaches the margin
    (finer grids only raise the lower estimate when they contain the
    coarser grid, as factors 2 and 4 do).  The direct stability check of
    ``p`` is always computed on the base grid for cross-validation.
    """
    report = margin_report if margin_report is not None else margin(p0, c, grid)
    est = kappa(p, p0, grid)
    used, final = [], grid
    for factor in refine:
        if _verdict(est, report.margin) is Verdict.CERTIFIED_STABLE:
            break
        fine = grid.refine(factor)
        if est.lower + est.lipschitz * fine.covering_radius >= report.margin:
            continue
        log.info("refining kappa grid x%d (delta %.4g)", factor, fine.covering_radius)
        est, final = kappa(p, p0, fine), fine
        used.append(factor)
    return RobustnessCertificate(
        kappa=est,
        margin=report.margin,
        verdict=_verdict(est, report.margin),
        independent_check=is_stabilized_by(p, c, grid),
        grid=final,
        margin_report=report,
        refinements=tuple(used),
    )


# -- the bidisc example ---------------------------------------------------------

def _w() -> Series:
    return Series.monomial((1, 1))


def example_controller() -> Series:
    """``c = z1 z2``."""
    return _w()


def example_plant(alpha: float = 0.0) -> CoprimePlant:
    """``p_alpha = (z1 z2 - alpha) / (z1^2 z2^2 - 1)`` with explicit Bezout pair.

    ``x = (z1 z2 + alpha) / (1 - alpha^2)`` and ``y = -1 / (1 - alpha^2)``
    satisfy ``n x + d y = 1``; ``alpha = 0`` is the nominal plant.
    """
    if not abs(alpha) < 1:
        raise ValueError(f"|alpha| must be < 1, got {alpha}")
    w = _w()
    s = 1.0 - alpha * alpha
    return make_plant(w - alpha, w * w - 1, ((w + alpha) / s, Series.constant(-1.0 / s)))


def example_nominal() -> CoprimePlant:
    return example_plant(0.0)


def analytic_kappa_bound(alpha: float) -> float:
    """Analytic upper estimate ``(2/sqrt 3) |alpha|`` for the example family."""
    return 2 / math.sqrt(3) * abs(alpha)


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    kappa_lower: float
    kappa_upper: float
    analytic_bound: float
    margin: float
    verdict: Verdict
    independent_check: Certificate
    grid_delta: float

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "kappa_lower": self.kappa_lower,
            "kappa_upper": self.kappa_upper,
            "analytic_bound": self.analytic_bound,
            "margin": self.margin,
            "verdict": str(self.verdict),
            "independent_check": str(self.independent_check),
            "grid_delta": self.grid_delta,
        }


def example_sweep(
    alphas: Iterable[float],
    grid: PolydiscGrid,
    refine: Sequence[int] = DEFAULT_REFINEMENTS,
) -> list[SweepRow]:
    """Certify each ``p_alpha`` against the nominal plant; rows in input order."""
    alphas = [float(a) for a in alphas]
    for a in alphas:
        if not abs(a) < 1:
            raise ValueError(f"|alpha| must be < 1, got {a}")
    p0, c = example_nominal(), example_controller()
    report = margin(p0, c, grid)
    rows = []
    for a in alphas:
        cert = certify(example_plant(a), p0, c, grid, refine, report)
        rows.append(
            SweepRow(
                alpha=a,
                kappa_lower=cert.kappa.lower,
                kappa_upper=cert.kappa.upper,
                analytic_bound=analytic_kappa_bound(a),
                margin=cert.margin,
                verdict=cert.verdict,
                independent_check=cert.independent_check,
                grid_delta=cert.grid.covering_radius,
            )
        )
    return rows


# -- randomized soundness harness ----------------------------------------------

@dataclass
class TheoremTestReport:
    """Counts from :func:`empirical_theorem_test`.

    ``certified_not_stable`` counts CERTIFIED_STABLE verdicts whose direct
    check was DISPROVED; any nonzero value contradicts the theorem.
    """

    trials: int = 0
    seed: int = 0
    margin: float = 0.0
    certified_stable: int = 0
    certified_not_stable: int = 0
    certified_inconclusive: int = 0
    uncertified_stable: int = 0
    uncertified_unstable: int = 0
    uncertified_inconclusive: int = 0
    coprime_rejected: int = 0
    max_certified_kappa: float = 0.0
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "violations"}
        out["violations"] = [repr(v) for v in self.violations]
        return out


def _scaled_perturbation(rng, nvars, max_degree, max_l1) -> Series:
    size = (max_degree + 1) ** nvars
    e = random_series(rng, nvars, max_degree, nterms=int(rng.integers(1, size + 1)))
    target = rng.uniform(0.0, max_l1)
    norm = l1_norm(e)
    return e * (target / norm) if norm > 0 else e


def record_trial(report: TheoremTestReport, cert: RobustnessCertificate, plant=None) -> None:
    chk = cert.independent_check
    if cert.verdict is Verdict.CERTIFIED_STABLE:
        report.max_certified_kappa = max(report.max_certified_kappa, cert.kappa.upper)
        if chk is Certificate.PROVED:
            report.certified_stable += 1
        elif chk is Certificate.DISPROVED:
            report.certified_not_stable += 1
            report.violations.append(plant)
        else:
            report.certified_inconclusive += 1
    elif chk is Certificate.PROVED:
        report.uncertified_stable += 1
    elif chk is Certificate.DISPROVED:
        report.uncertified_unstable += 1
    else:
        report.uncertified_inconclusive += 1


def empirical_theorem_test(
    trials: int,
    seed: int,
    grid: PolydiscGrid,
    nominal: CoprimePlant | None = None,
    controller: Series | None = None,
    max_l1: float = 0.05,
    max_degree: int = 3,
) -> TheoremTestReport:
    """Randomly perturb the nominal factors and cross-check every verdict.

    Each trial draws ``e, f`` with random support (degree <= ``max_degree``
    per variable) and l1 norm uniform in ``[0, max_l1]``, forms
    ``p = (n0 + e) / (d0 + f)``, re-certifies coprimeness on ``grid`` and
    compares :func:`certify` with the direct stability check.
    Deterministic for a given seed.
    """
    p0 = nominal if nominal is not None else example_nominal()
    c = controller if controller is not None else example_controller()
    report = TheoremTestReport(trials=max(trials, 0), seed=seed)
    if trials <= 0:
        return report
    rng = np.random.default_rng(seed)
    mreport = margin(p0, c, grid)
    report.margin = mreport.margin
    for _ in range(trials):
        e = _scaled_perturbation(rng, p0.nvars, max_degree, max_l1)
        f = _scaled_perturbation(rng, p0.nvars, max_degree, max_l1)
        try:
            p = make_plant(p0.num + e, p0.den + f, grid=grid)
        except CoprimenessError:
            report.coprime_rejected += 1
            continue
        record_trial(report, certify(p, p0, c, grid, margin_report=mreport), p)
    return report
