"""Predicted exponents, region classification, and verification drivers."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypfourier import (
    DomainError,
    ModelParams,
    RegionPoint,
    classify_region,
    plancherel_density,
    predicted_alpha,
    predicted_offduality_projector,
    spectral_projector_radial,
)
from hypfourier.transform import RadialFunction, radial_grid
from hypfourier.verify import (
    gaussian_pair_symbol,
    region_grid,
    run_projector_scaling,
    run_smallfreq_check,
    stein_tomas_exponent,
)

dims = st.integers(min_value=2, max_value=6)


# ---------------------------------------------------------------------------
# predicted exponents
# ---------------------------------------------------------------------------


def test_stein_tomas_values():
    assert stein_tomas_exponent(2) == pytest.approx(6.0)
    assert stein_tomas_exponent(3) == pytest.approx(4.0)
    assert stein_tomas_exponent(4) == pytest.approx(10.0 / 3.0)


@pytest.mark.parametrize(
    "p,d,want",
    [
        (6.0, 2, 1.0 / 3.0),  # at p_ST both branches give 1/3
        (4.0, 3, 0.5),
        (8.0, 3, 2.0 - 6.0 / 8.0),
        (3.0, 3, 2.0 * (0.5 - 1.0 / 3.0)),
        (math.inf, 3, 2.0),
    ],
)
def test_alpha_values(p, d, want):
    pred = predicted_alpha(p, d)
    assert pred.exponent == pytest.approx(want, abs=1e-14)
    assert pred.p_ST == pytest.approx(stein_tomas_exponent(d))


def test_alpha_records_endpoint_blowup():
    below = predicted_alpha(3.0, 3)
    assert below.constant_blowup == "(p-2)^{-1}"
    above = predicted_alpha(5.0, 3)
    assert above.constant_blowup is None


def test_alpha_domain():
    with pytest.raises(DomainError):
        predicted_alpha(2.0, 3)
    with pytest.raises(DomainError):
        predicted_alpha(4.0, 1)


@given(dims, st.floats(min_value=1e-6, max_value=1e-2))
def test_alpha_continuous_at_stein_tomas(d, h):
    pst = stein_tomas_exponent(d)
    lo = predicted_alpha(pst * (1.0 - h), d).exponent
    hi = predicted_alpha(pst * (1.0 + h), d).exponent
    # both branches are Lipschitz in 1/p with slope <= 2d
    assert abs(hi - lo) <= 4.0 * d * h + 1e-12


@given(dims)
def test_alpha_branches_meet_exactly(d):
    pst = stein_tomas_exponent(d)
    pred = predicted_alpha(pst, d)
    other = (d - 1) * (0.5 - 1.0 / pst)
    assert abs(pred.exponent - other) < 1e-12


@given(st.floats(min_value=2.05, max_value=40.0), dims)
def test_offduality_collapses_on_the_duality_line(q, d):
    """s = q' turns the two-bracket bound into alpha(q) exactly."""
    s = q / (q - 1.0)
    pred = predicted_offduality_projector(s, q, d)
    assert pred.exponent == pytest.approx(predicted_alpha(q, d).exponent, abs=1e-12)


def test_offduality_blowup_labels():
    pred = predicted_offduality_projector(1.9, 2.5, 3)  # q < 4, s > 4/3
    assert "(q-2)^{-1/2}" in pred.constant_blowup
    assert "(2-s)^{-1/2}" in pred.constant_blowup
    clean = predicted_offduality_projector(1.2, 8.0, 3)
    assert clean.constant_blowup is None
    with pytest.raises(DomainError):
        predicted_offduality_projector(2.5, 4.0, 3)


# ---------------------------------------------------------------------------
# region classification
# ---------------------------------------------------------------------------


def test_region_point_validation():
    with pytest.raises(DomainError):
        RegionPoint(1.2, 0.3)
    with pytest.raises(DomainError):
        RegionPoint(0.5, 0.3, diagram="laplace")
    with pytest.raises(DomainError):
        RegionPoint(0.5, 0.3, region="V")


def test_classify_sample_point_d3():
    # (1/s, 1/q) = (0.8, 0.3): above the horizontal b = 1/3, left of the
    # dividing line 4a + 2b = 4  =>  region II bullet
    pt, val = classify_region(RegionPoint(0.8, 0.3), 3)
    assert pt.region == "II"
    assert val == pytest.approx(-0.2, abs=1e-12)


def test_classification_is_duality_invariant_bitwise():
    pt, val = classify_region(RegionPoint(0.8, 0.3), 3)
    mirror, mval = classify_region(RegionPoint(0.7, 0.2), 3)
    assert mirror.region == pt.region
    assert mval == val  # bit-identical, not just close


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
    st.integers(min_value=2, max_value=5),
    st.sampled_from(["resolvent", "dresolvent"]),
)
def test_duality_reflection_invariance(a, b, d, diagram):
    one = classify_region(RegionPoint(a, b, diagram=diagram), d)
    two = classify_region(RegionPoint(1.0 - b, 1.0 - a, diagram=diagram), d)
    assert one[0].region == two[0].region
    assert (one[1] == two[1]) or (math.isnan(one[1]) and math.isnan(two[1]))


def test_excluded_corner_and_gap():
    pt, val = classify_region(RegionPoint(0.5, 0.5), 3)
    assert pt.region == "outside" and math.isnan(val)
    # gap a - b beyond 2/d is inadmissible for the resolvent...
    pt, _ = classify_region(RegionPoint(1.0, 0.1), 3)
    assert pt.region == "outside"
    # ...and beyond 1/d for the derivative diagram
    pt, _ = classify_region(RegionPoint(0.95, 0.45, diagram="dresolvent"), 3)
    assert pt.region == "outside"
    pt, _ = classify_region(RegionPoint(0.95, 0.45), 3)
    assert pt.region != "outside"


def test_on_diagonal_displays():
    # duality-line points: resolvent shows max((rho/2) g - 1/2, (d/2) g - 1)
    _, val = classify_region(RegionPoint(0.75, 0.25), 3)
    assert val == pytest.approx(-0.25, abs=1e-12)
    _, dval = classify_region(RegionPoint(0.6, 0.4, diagram="dresolvent"), 3)
    assert dval == pytest.approx(0.1, abs=1e-12)


def test_region_grid_counts():
    rows = region_grid(3, "resolvent", n=21)
    assert len(rows) == 441
    labels = {pt.region for pt, _ in rows}
    assert {"I", "II", "III", "IV", "outside"} <= labels
    for pt, val in rows:
        assert (pt.region == "outside") == math.isnan(val)


def test_dresolvent_grid_never_sees_region_iii():
    # the 1/d gap swallows the III slot; the canonical-upper-half II wedge
    # degenerates to the horizontal itself, so only I and IV carry area
    labels = {pt.region for pt, _ in region_grid(3, "dresolvent", n=41)}
    assert "III" not in labels
    assert {"I", "IV"} <= labels


def test_classify_region_needs_real_dimension():
    with pytest.raises(DomainError):
        classify_region(RegionPoint(0.8, 0.3), 1)


# ---------------------------------------------------------------------------
# drivers: preconditions and cheap invariants
# ---------------------------------------------------------------------------


def test_projector_scaling_preconditions():
    with pytest.raises(DomainError):
        run_projector_scaling(3, 6.0, "spiral")
    with pytest.raises(DomainError):
        run_projector_scaling(3, 6.0, "radial", lambdas=(2.0, 8.0, 32.0))


def test_smallfreq_rejects_large_frequencies():
    with pytest.raises(DomainError):
        run_smallfreq_check(3, (0.5, 1.0, 2.0), 4.0)


def test_projector_vanishes_at_zero_frequency():
    """P_Lambda f -> 0 pointwise as Lambda -> 0: the Plancherel density
    kills the rank-one term."""
    params = ModelParams(3)
    rg = radial_grid(10.0, 256)
    f = RadialFunction(rg, np.exp(-rg.nodes**2), params)
    sups = [
        float(np.max(np.abs(spectral_projector_radial(L, f).values)))
        for L in (0.5, 0.1, 0.01)
    ]
    assert sups[0] > sups[1] > sups[2]
    assert sups[2] < 1e-3


def test_gaussian_pair_symbol_structure():
    m = gaussian_pair_symbol(mu=6.0, width=1.0)
    assert m.even and m.band is not None and m.mhat_support is not None
    # the symbol peaks near lam = mu and its mhat oscillates at frequency mu
    lam = np.linspace(0.0, 12.0, 601)
    vals = np.asarray(m.eval(lam))
    assert abs(float(lam[np.argmax(vals)]) - 6.0) < 0.1
    assert m.osc_freq == pytest.approx(6.0)
    xi = np.linspace(0.0, 3.0, 301)
    mh = m.mhat(xi, 0)
    # cos(mu xi) envelope: roughly mu xi_max / pi sign changes
    assert np.sum(np.abs(np.diff(np.sign(mh)))) / 2 >= 4


def test_smallfreq_density_model_d2():
    """At small Lambda the d=2 quotient is pinned to the exact density; the
    raw window slope bends well below 2 through the tanh factor."""
    fit = run_smallfreq_check(2, (1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8), 4.0)
    assert fit.slope < 2.0
    dens_slope = np.polyfit(
        np.log([1.0 / 64, 1.0 / 8]),
        np.log(
            [
                float(plancherel_density(L, ModelParams(2)))
                for L in (1.0 / 64, 1.0 / 8)
            ]
        ),
        1,
    )[0]
    assert fit.slope == pytest.approx(dens_slope, abs=0.1)
