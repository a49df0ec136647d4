import math

import pytest

from chordal.bounds import Certificate
from chordal.grid import make_grid
from chordal.plants import make_plant
from chordal.robustness import (
    EXAMPLE_MARGIN,
    EXAMPLE_THRESHOLD,
    NotStabilizedError,
    TheoremTestReport,
    Verdict,
    certify,
    empirical_theorem_test,
    example_sweep,
    margin,
    margin_formula,
    analytic_kappa_bound,
    record_trial,
)
from chordal.series import Series


def test_margin_formula_values():
    assert margin_formula(1, 1) == pytest.approx(1 / 6)
    assert margin_formula(1, 2) == pytest.approx(1 / 9)
    assert margin_formula(0, 0) == pytest.approx(1 / 3)
    assert margin_formula(0, 4) == pytest.approx(1 / 12)
    assert margin_formula(2, 0) == pytest.approx(1 / 6)
    with pytest.raises(ValueError):
        margin_formula(-1, 1)


def test_margin_formula_monotone():
    for k in (0.5, 1, 2):
        for g in (0.5, 1, 2):
            assert margin_formula(k * 1.1, g) <= margin_formula(k, g)
            assert margin_formula(k, g * 1.1) <= margin_formula(k, g)


def test_example_constants():
    # threshold on alpha that keeps the analytic estimate below the margin
    assert analytic_kappa_bound(EXAMPLE_THRESHOLD) == pytest.approx(EXAMPLE_MARGIN)


def test_example_margin(p0, controller, coarse_grid):
    rep = margin(p0, controller, coarse_grid)
    assert rep.stabilizes_nominal is Certificate.PROVED
    assert 1.0 in rep.k_bound and 1.0 in rep.g_bound
    assert rep.margin <= EXAMPLE_MARGIN + 1e-12
    assert rep.margin == pytest.approx(EXAMPLE_MARGIN, abs=1e-12)


def test_zero_controller(w, coarse_grid):
    p = make_plant(Series.constant(1.0), 2 + w, grid=coarse_grid)
    rep = margin(p, Series.zero(2), coarse_grid)
    assert rep.k == 0
    # g = sup 1/|2 + z1 z2| = 1
    assert 1.0 in rep.g_bound
    assert rep.margin == pytest.approx(margin_formula(0, rep.g))


def test_margin_requires_stabilization(p0, coarse_grid):
    with pytest.raises(NotStabilizedError) as info:
        margin(p0, Series.zero(2), coarse_grid)
    assert info.value.certificate is Certificate.DISPROVED


def test_certify_self_is_stable(p0, controller, coarse_grid):
    cert = certify(p0, p0, controller, coarse_grid)
    assert cert.verdict is Verdict.CERTIFIED_STABLE
    assert cert.kappa_upper == 0
    d = cert.to_dict()
    assert set(d) == {"k", "g", "margin", "kappa_lower", "kappa_upper", "verdict", "independent_check", "grid"}
    assert d["verdict"] == "certified_stable"


def test_certify_far_plant(p_alpha, p0, controller, coarse_grid):
    cert = certify(p_alpha(0.5), p0, controller, coarse_grid, refine=(2,))
    assert cert.verdict is Verdict.NOT_CERTIFIED
    assert cert.kappa_lower > cert.margin
    # hopeless, so refinement is skipped
    assert cert.refinements == ()


def test_refinement_tightens(p_alpha, p0, controller):
    grid = make_grid(2, 6, 16)
    base = certify(p_alpha(0.02), p0, controller, grid)
    refined = certify(p_alpha(0.02), p0, controller, grid, refine=(2, 4))
    assert refined.kappa_upper <= base.kappa_upper
    if base.verdict is Verdict.NOT_CERTIFIED:
        assert refined.refinements


def test_sweep_rows(coarse_grid):
    rows = example_sweep([0.0, 0.3, -0.02], coarse_grid, refine=())
    assert [r.alpha for r in rows] == [0.0, 0.3, -0.02]
    for r in rows:
        assert r.kappa_lower <= r.kappa_upper
        assert r.analytic_bound == pytest.approx(2 / math.sqrt(3) * abs(r.alpha))
        assert r.kappa_lower <= r.analytic_bound + 1e-9
    assert rows[0].verdict is Verdict.CERTIFIED_STABLE
    assert rows[1].verdict is Verdict.NOT_CERTIFIED
    with pytest.raises(ValueError):
        example_sweep([1.0], coarse_grid)


def test_empirical_zero_trials(coarse_grid):
    rep = empirical_theorem_test(0, 1, coarse_grid)
    assert rep.trials == 0 and rep.violations == []


def test_empirical_small_run_is_deterministic(coarse_grid):
    a = empirical_theorem_test(4, 11, coarse_grid)
    b = empirical_theorem_test(4, 11, coarse_grid)
    assert a.to_dict() == b.to_dict()
    assert a.certified_not_stable == 0
    total = (
        a.certified_stable + a.certified_inconclusive + a.uncertified_stable
        + a.uncertified_unstable + a.uncertified_inconclusive + a.coprime_rejected
    )
    assert total == 4


def test_record_trial_counts_violations(p0, controller, coarse_grid):
    from dataclasses import replace

    cert = certify(p0, p0, controller, coarse_grid)
    rep = TheoremTestReport()
    record_trial(rep, replace(cert, independent_check=Certificate.DISPROVED), "bad")
    record_trial(rep, cert)
    assert rep.certified_not_stable == 1 and rep.violations == ["bad"]
    assert rep.certified_stable == 1
