import math
import random

import numpy as np
import pytest

from effrange.analysis import (
    DEFAULT_WINDOW,
    USE_FITTED,
    USE_RANGE_R,
    bisect_secant,
    compare_expansions,
    fit_effective_range,
    ksq_grid,
    ksq_slope_at_threshold,
    scattering_length_scan,
    scattering_length_zeros,
    solve_beta_for_target_a,
)
from effrange.errors import BracketError, FitInversionError, ScatteringError
from effrange.expansions import ErParams, ExpansionKind, eval_expansion
from effrange.potentials import SquareWell
from effrange.records import PhaseRecord
from effrange.squarewell import exact_phase_record, scattering_length, taylor_coefficients

from . import oracles

K = ExpansionKind


def exact_records(well, kk_max, n=50):
    return [exact_phase_record(well, math.sqrt(s)) for s in kk_max * np.arange(1, n + 1) / n]


def model_records(kind, p, kk_max, n=40):
    out = []
    for s in kk_max * np.arange(1, n + 1) / n:
        k = math.sqrt(s)
        v = eval_expansion(kind, p, k)
        if kind.value_role == "k_cot_delta":
            out.append(PhaseRecord.from_tangent(k, k, v))
        elif kind.value_role == "tan_delta_over_k":
            out.append(PhaseRecord.from_tan_delta_over_k(k, v))
        else:
            out.append(PhaseRecord.from_delta(k, -k * v))
    return out


# -- scan and zeros ----------------------------------------------------------

def test_scan_sign_flip_across_first_resonance():
    pts = scattering_length_scan(1.0, 1.5 * math.pi, 3000)
    below = [p for p in pts if not p.pole and math.pi / 2 - 0.01 < p.beta_R < math.pi / 2]
    above = [p for p in pts if not p.pole and math.pi / 2 < p.beta_R < math.pi / 2 + 0.01]
    assert below and above
    assert all(p.a_over_R < -50 for p in below)
    assert all(p.a_over_R > 50 for p in above)


def test_scan_flags_exact_pole():
    pts = scattering_length_scan(1.0, math.pi, 2)
    assert pts[0].pole and pts[0].a_over_R is None
    assert pts[1].a_over_R == pytest.approx(1.0, abs=1e-15)


def test_scan_grid_and_scaling():
    pts = scattering_length_scan(2.0, 3.0, 10)
    assert [p.beta_R for p in pts] == pytest.approx([6.0 * i / 10 for i in range(1, 11)])
    for p in pts:
        if not p.pole:
            assert p.a_over_R == pytest.approx(oracles.scattering_length(p.beta_R), rel=1e-12)


def test_scan_validation():
    with pytest.raises(ValueError):
        scattering_length_scan(1.0, 3.0, 1)
    with pytest.raises(ValueError):
        scattering_length_scan(1.0, -3.0, 10)


def test_zeros():
    zs = scattering_length_zeros(10.0)
    assert len(zs) == 2
    assert zs[0] == pytest.approx(4.4934, abs=1e-4)
    assert zs[1] == pytest.approx(7.7253, abs=1e-4)
    assert zs[1] == pytest.approx(oracles.bisect(lambda x: math.tan(x) - x, 2 * math.pi + 1e-6, 2.5 * math.pi - 1e-6), abs=1e-11)


# -- inverse solve -----------------------------------------------------------

@pytest.mark.parametrize("target, bracket, expected, tol", [
    (0.0, (4, 4.7), 4.4934, 1e-4),
    (1.0, (3, 4.4), math.pi, 1e-12),
    (2.54, (math.pi / 2 + 0.01, math.pi), 1.9006, 1e-3),
    (-3.14, (1.2, math.pi / 2 - 0.01), 1.3995, 1e-3),
])
def test_solve_beta_examples(target, bracket, expected, tol):
    beta = solve_beta_for_target_a(1.0, target, bracket)
    assert beta == pytest.approx(expected, abs=tol)
    assert abs(scattering_length(SquareWell(1, beta)) - target) < 1e-10 * max(1, abs(target))


def test_solve_beta_matches_bisection_oracle():
    beta = solve_beta_for_target_a(1.0, 2.54, (math.pi / 2 + 0.01, math.pi))
    ref = oracles.bisect(lambda x: oracles.scattering_length(x) - 2.54, math.pi / 2 + 0.01, math.pi)
    assert beta == pytest.approx(ref, abs=1e-11)


def test_solve_beta_scaled_well():
    beta = solve_beta_for_target_a(2.0, 5.08, (math.pi / 2 + 0.01, math.pi))
    assert beta * 2.0 == pytest.approx(solve_beta_for_target_a(1.0, 2.54, (math.pi / 2 + 0.01, math.pi)), rel=1e-12)


def test_solve_beta_bracket_errors():
    with pytest.raises(BracketError, match="1.570796"):
        solve_beta_for_target_a(1.0, 0.5, (1.0, 2.0))
    with pytest.raises(BracketError, match="does not change sign"):
        solve_beta_for_target_a(1.0, 5.0, (3.0, 4.4))


@pytest.mark.parametrize("branch", [(1e-3, math.pi / 2), (math.pi / 2, 1.5 * math.pi), (1.5 * math.pi, 2.5 * math.pi)])
def test_inverse_identity_random_targets(branch):
    rng = random.Random(20241018)
    lo, hi = branch[0] + 1e-3, branch[1] - 1e-3
    for _ in range(50):
        x = rng.uniform(lo, hi)
        target = oracles.scattering_length(x)
        beta = solve_beta_for_target_a(1.0, target, (lo, hi))
        got = scattering_length(SquareWell(1, beta))
        assert abs(got - target) <= 1e-10 * max(1.0, abs(target))


def test_bisect_secant_requires_sign_change():
    with pytest.raises(BracketError):
        bisect_secant(lambda x: x * x + 1, -1, 1)
    assert bisect_secant(lambda x: x - 0.3, 0, 1) == pytest.approx(0.3, abs=1e-14)


# -- threshold slope ---------------------------------------------------------

@pytest.mark.parametrize("beta", [1.0, 1.9006, 4.4, 4.4934])
def test_threshold_slope(beta):
    well = SquareWell(1, beta)
    assert ksq_slope_at_threshold(well) == pytest.approx(taylor_coefficients(well).b_small, rel=1e-9)


# -- fitting -----------------------------------------------------------------

def test_fit_recovers_own_model():
    p = ErParams(5.0, 1.0)
    fit = fit_effective_range(model_records(K.TextbookLargeA, p, 0.05), K.TextbookLargeA, (0, 0.05))
    assert fit.params.a == pytest.approx(5.0, rel=1e-10)
    assert fit.params.r0 == pytest.approx(1.0, rel=1e-10)
    assert fit.rms_residual < 1e-12
    assert fit.n_points == 40


@pytest.mark.parametrize("kind, p", [
    (K.ImprovedSmallA, ErParams(0.3, 1.2)),
    (K.ImprovedLargeA, ErParams(2.54, 1.0)),
    (K.ImprovedLargeA, ErParams(-3.14, 0.8)),
    (K.ReciprocalSmallA, ErParams(-0.1, 0.9)),
    (K.InverseOfTextbook, ErParams(0.4, 1.1)),
    (K.KetterleParam, ErParams(0.2963, 1.0)),
])
def test_fit_back_maps(kind, p):
    fit = fit_effective_range(model_records(kind, p, 0.05), kind, (0, 0.05))
    assert fit.params.a == pytest.approx(p.a, rel=1e-10)
    assert fit.params.r0 == pytest.approx(p.r0, rel=1e-9)


def test_fit_inversion_error_reports_slope():
    # a negative slope with a=0 has no positive root of r^3 = 6 slope
    recs = [PhaseRecord.from_tan_delta_over_k(math.sqrt(s), -0.5 * s) for s in (0.01, 0.02, 0.03, 0.04)]
    with pytest.raises(FitInversionError) as info:
        fit_effective_range(recs, K.ImprovedSmallA, (0, 0.05))
    assert info.value.slope == pytest.approx(-0.5)


def test_fit_needs_three_points():
    recs = exact_records(SquareWell(1, 4.4), 0.05, n=2)
    with pytest.raises(ScatteringError):
        fit_effective_range(recs, K.ReciprocalSmallA, (0, 0.05))


def test_fit_small_a_well():
    fit = fit_effective_range(exact_records(SquareWell(1, 4.4934), 0.05), K.ReciprocalSmallA, (0, 0.05))
    assert abs(fit.params.a) < 1e-3
    assert fit.params.r0 == pytest.approx(1.0, rel=0.02)


def test_fit_large_a_well():
    well = SquareWell(1, 1.9006)
    fit = fit_effective_range(exact_records(well, 0.05), K.TextbookLargeA, (0, 0.05))
    assert fit.slope == pytest.approx(taylor_coefficients(well).c_large, rel=0.02)


def test_fit_scale_consistency():
    lam = 3.7
    base = SquareWell(1.0, 4.4)
    scaled = SquareWell(lam, 4.4 / lam)
    for kind in (K.ReciprocalSmallA, K.ImprovedSmallA):
        f1 = fit_effective_range(exact_records(base, 0.05), kind, (0, 0.05))
        f2 = fit_effective_range(exact_records(scaled, 0.05 / lam**2), kind, (0, 0.05 / lam**2))
        assert f2.params.a == pytest.approx(lam * f1.params.a, rel=1e-10)
        assert f2.params.r0 == pytest.approx(lam * f1.params.r0, rel=1e-10)


def test_fit_slope_converges_with_window():
    well = SquareWell(1, 4.4)
    b = taylor_coefficients(well).b_small
    errs = []
    for kk in (0.04, 0.02, 0.01, 0.005):
        fit = fit_effective_range(exact_records(well, kk), K.ReciprocalSmallA, (0, kk))
        errs.append(abs(fit.slope - b))
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    # linear in the window width
    assert errs[0] / errs[-1] == pytest.approx(8, rel=0.1)


def test_fit_skips_flagged_tan_records():
    recs = exact_records(SquareWell(1, 4.4), 0.05)
    recs.append(PhaseRecord.from_delta(0.2, math.pi / 2))
    fit = fit_effective_range(recs, K.ReciprocalSmallA, (0, 0.05))
    assert fit.n_points == 50


def test_fit_rejects_kcot_pole():
    recs = exact_records(SquareWell(1, 1.9006), 0.05)
    recs.append(PhaseRecord.from_delta(0.1, 0.0))
    with pytest.raises(ScatteringError):
        fit_effective_range(recs, K.TextbookLargeA, (0, 0.05))


# -- comparisons -------------------------------------------------------------

def test_ksq_grid():
    assert ksq_grid((0, 0.5), 5).tolist() == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])
    g = ksq_grid(DEFAULT_WINDOW, 100)
    assert g[0] == 0.005 and g[-1] == 0.5 and len(g) == 100
    with pytest.raises(ValueError):
        ksq_grid((0.5, 0.1), 3)


def test_compare_zero_a_reports_identical():
    r22, r23 = compare_expansions(SquareWell(1, 4.4934), [K.ReciprocalSmallA, K.ImprovedSmallA], USE_RANGE_R, (0, 0.5))
    assert r23.max_abs_dev == pytest.approx(r22.max_abs_dev, rel=1e-6)


@pytest.mark.parametrize("beta, basic, improved", [
    (4.4, K.ReciprocalSmallA, K.ImprovedSmallA),
    (1.9006, K.TextbookLargeA, K.ImprovedLargeA),
])
def test_compare_ordering_examples(beta, basic, improved):
    rb, ri = compare_expansions(SquareWell(1, beta), [basic, improved], USE_RANGE_R, (0, 0.5))
    assert ri.max_abs_dev < rb.max_abs_dev
    assert rb.n_flagged == 0 and len(rb.samples) == 100


def test_compare_fitted_policy_beats_fixed_range():
    well = SquareWell(1, 4.4)
    fixed, = compare_expansions(well, [K.ReciprocalSmallA], USE_RANGE_R, (0, 0.05), 40)
    fitted, = compare_expansions(well, [K.ReciprocalSmallA], USE_FITTED, (0, 0.05), 40)
    assert fitted.max_abs_dev < fixed.max_abs_dev


def test_compare_flags_kcot_pole():
    from scipy.optimize import brentq

    # tan(delta) = 0 at s0; a window starting there puts a grid point on the pole of k cot(delta)
    well = SquareWell(1, 5.0)
    s0 = brentq(lambda s: exact_phase_record(well, math.sqrt(s)).tan_delta_over_k, 8.0, 8.5, xtol=1e-15)
    report, = compare_expansions(well, [K.TextbookLargeA], USE_RANGE_R, (s0, s0 + 1), 11)
    assert report.n_flagged == 1 and report.flagged[0]
    assert math.isfinite(report.max_abs_dev)


def test_compare_rejects_wide_window():
    with pytest.raises(ScatteringError):
        compare_expansions(SquareWell(1, 2.0), [K.TextbookLargeA], USE_RANGE_R, (0, 5.0))


def test_compare_validation():
    with pytest.raises(ValueError):
        compare_expansions(SquareWell(1, 4.4), [K.ReciprocalSmallA], "guess")
