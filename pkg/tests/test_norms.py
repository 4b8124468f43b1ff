"""Lebesgue norms in the polar and horocyclic charts, and power-law fits."""

import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given
from hypothesis import strategies as st

from hypfourier import (
    DomainError,
    IwasawaBox,
    ModelParams,
    PolarSamples,
    fit_scaling_exponent,
    lp_norm_iwasawa,
    lp_norm_polar,
    sphere_lp_norm,
)
from hypfourier.operators import sphere_grid
from hypfourier.specfun import spherical_batch
from hypfourier.transform import RadialFunction, radial_grid


# ---------------------------------------------------------------------------
# polar chart
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d,p", [(2, 1.0), (2, 3.0), (3, 2.0), (4, 2.5)])
def test_polar_norm_against_adaptive_quadrature(d, p):
    params = ModelParams(d)
    rg = radial_grid(12.0, 512)
    f = RadialFunction(rg, np.exp(-rg.nodes**2) * (1.0 + rg.nodes), params)

    def integrand(r):
        return (math.exp(-r * r) * (1.0 + r)) ** p * math.sinh(r) ** (d - 1)

    ref, _ = scipy.integrate.quad(integrand, 0.0, 12.0, limit=400)
    want = (params.omega_sphere * ref) ** (1.0 / p)
    assert lp_norm_polar(f, p) == pytest.approx(want, rel=1e-9)


def test_sup_norm():
    params = ModelParams(2)
    rg = radial_grid(6.0, 128)
    f = RadialFunction(rg, np.cos(rg.nodes) * np.exp(-rg.nodes), params)
    assert lp_norm_polar(f, math.inf) == pytest.approx(
        float(np.max(np.abs(f.values)))
    )


def test_polar_norm_validation():
    params = ModelParams(2)
    rg = radial_grid(4.0, 64)
    f = RadialFunction(rg, np.exp(-rg.nodes**2), params)
    with pytest.raises(DomainError):
        lp_norm_polar(f, 0.5)
    with pytest.raises(DomainError):
        lp_norm_polar(f, 2.0, tail="chop")


def test_spherical_function_has_infinite_l2_norm():
    """|Phi_lam|^2 sinh^{2 rho} approaches a non-integrable envelope, and the
    tail analysis must report the divergence rather than a grid value."""
    params = ModelParams(3)
    rg = radial_grid(40.0, 768)
    phi = spherical_batch(8.0, rg.nodes, params)
    assert lp_norm_polar(RadialFunction(rg, phi, params), 2.0) == math.inf


def test_truncated_reading_is_finite():
    params = ModelParams(3)
    rg = radial_grid(40.0, 768)
    phi = spherical_batch(8.0, rg.nodes, params)
    f = RadialFunction(rg, phi, params)
    val, diag = lp_norm_polar(f, 2.0, tail="truncate", with_diagnostics=True)
    assert math.isfinite(val) and val > 0
    assert not diag.divergent


def test_decaying_tail_is_extrapolated():
    # e^{-r} is slow enough that the truncated value visibly undershoots;
    # the extrapolated reading must recover the analytic answer
    params = ModelParams(2)
    rg = radial_grid(14.0, 512)
    f = RadialFunction(rg, np.exp(-3.0 * rg.nodes), params)
    # int_0^inf e^{-6r} sinh r dr = (1/5 - 1/7)/2 = 1/35
    want = (params.omega_sphere / 35.0) ** 0.5
    assert lp_norm_polar(f, 2.0) == pytest.approx(want, rel=1e-6)


def test_polar_samples_validation():
    params = ModelParams(2)
    rg = radial_grid(4.0, 32)
    sg = sphere_grid(params, 16)
    good = np.ones((rg.n, sg.n))
    PolarSamples(grid=rg, values=good, sphere_weights=sg.weights, params=params)
    with pytest.raises(DomainError):
        PolarSamples(grid=rg, values=good[:, :-1], sphere_weights=sg.weights, params=params)
    with pytest.raises(DomainError):
        PolarSamples(
            grid=rg, values=good, sphere_weights=0.5 * sg.weights, params=params
        )


def test_polar_samples_norm_matches_radial():
    params = ModelParams(3)
    rg = radial_grid(10.0, 256)
    sg = sphere_grid(params, 24, 32)
    prof = np.exp(-rg.nodes**2)
    f_rad = RadialFunction(rg, prof, params)
    f_smp = PolarSamples(
        grid=rg,
        values=np.repeat(prof[:, None], sg.n, axis=1),
        sphere_weights=sg.weights,
        params=params,
    )
    assert lp_norm_polar(f_smp, 3.0) == pytest.approx(lp_norm_polar(f_rad, 3.0), rel=1e-12)


# ---------------------------------------------------------------------------
# horocyclic chart
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3])
def test_iwasawa_norm_of_gaussian_matches_polar(d):
    """The same function integrated in both charts: F depends only on the
    distance to the base point, cosh(dist) = cosh s + e^{-s}|v|^2 / 2."""
    params = ModelParams(d)

    def chart_values(s, v):
        ch = np.cosh(s) + 0.5 * np.exp(-s) * v**2
        return np.exp(-4.0 * (ch - 1.0))

    box = IwasawaBox(-9.0, 9.0, -9.0 if d == 2 else 0.0, 9.0)
    got = lp_norm_iwasawa(chart_values, 2.0, box, params, n_s=384, n_v=384)

    rg = radial_grid(10.0, 384)
    prof = np.exp(-4.0 * (np.cosh(rg.nodes) - 1.0))
    want = lp_norm_polar(RadialFunction(rg, prof, params), 2.0)
    assert got == pytest.approx(want, rel=1e-9)


def test_iwasawa_box_validation():
    with pytest.raises(DomainError):
        IwasawaBox(1.0, -1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        lp_norm_iwasawa(
            lambda s, v: np.ones_like(s * v),
            2.0,
            IwasawaBox(0.0, 1.0, -1.0, 1.0),
            ModelParams(3),
        )


# ---------------------------------------------------------------------------
# sphere norms
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
def test_sphere_norm_of_constants(d, p):
    params = ModelParams(d)
    sg = sphere_grid(params, 48) if d == 2 else sphere_grid(params, 24, 32)
    ones = np.ones(sg.n)
    got = sphere_lp_norm((ones, sg.weights), p)
    assert got == pytest.approx(params.omega_sphere ** (1.0 / p), rel=1e-12)


def test_sphere_sup_norm():
    params = ModelParams(2)
    sg = sphere_grid(params, 64)
    vals = sg.nodes[:, 0]
    assert sphere_lp_norm((vals, sg.weights), math.inf) == pytest.approx(
        float(np.max(np.abs(vals)))
    )


# ---------------------------------------------------------------------------
# power-law fits
# ---------------------------------------------------------------------------


@given(
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=0.1, max_value=40.0),
)
def test_fit_recovers_exact_power_law(slope, scale):
    lams = (4.0, 8.0, 16.0, 32.0)
    fit = fit_scaling_exponent([(l, scale * l**slope) for l in lams])
    assert fit.slope == pytest.approx(slope, abs=1e-9)
    assert fit.max_residual < 1e-9
    assert fit.predicted(64.0) == pytest.approx(scale * 64.0**slope, rel=1e-7)


def test_fit_validation():
    with pytest.raises(DomainError):
        fit_scaling_exponent([(8.0, 1.0), (16.0, 2.0)])
    with pytest.raises(DomainError):
        fit_scaling_exponent([(8.0, 1.0), (16.0, math.inf), (32.0, 2.0)])
    with pytest.raises(DomainError):
        fit_scaling_exponent([(8.0, 1.0), (16.0, -2.0), (32.0, 2.0)])
    with pytest.raises(DomainError):
        # spread under a factor 4 is too ill-conditioned to mean anything
        fit_scaling_exponent([(8.0, 1.0), (9.0, 1.1), (10.0, 1.2)])
