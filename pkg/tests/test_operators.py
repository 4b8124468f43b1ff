"""Extension/restriction/projector operators, resolvent symbols, smoothing."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypfourier import (
    AccuracyError,
    ConsistencyError,
    DomainError,
    ModelParams,
    ResolventParams,
    SmoothingExponent,
    SphereFunction,
    dresolvent_symbol,
    knapp_cap,
    plancherel_density,
    resolvent_symbol,
    restriction_operator_d2,
    smoothing_functional,
    spectral_projector_radial,
    sphere_grid,
)
from hypfourier.geometry import ambient_from_polar_arrays
from hypfourier.operators import extension_operator
from hypfourier.transform import (
    RadialFunction,
    SpectralFunction,
    forward_radial_ft,
    inverse_radial_ft,
    radial_ft_at,
    radial_grid,
    spectral_grid,
)
from hypfourier.verify import check_operator_identities


def test_extension_restriction_projector_identities():
    """Five continuum identities tying E, R, and P together on H^2: the
    radial image of E, the constant image of R on radial data, adjointness,
    the factorisation P = E R, and the projector pairing."""
    errs = check_operator_identities(2.0)
    assert set(errs) == {
        "extension_radial",
        "restriction_radial",
        "adjoint",
        "factorisation",
        "pairing",
    }
    for name, err in errs.items():
        assert err < 1e-6, f"{name}: {err:.3e}"


def test_projector_is_rank_one_on_radial_data():
    params = ModelParams(3)
    rg = radial_grid(10.0, 384)
    f = RadialFunction(rg, np.exp(-1.2 * rg.nodes**2), params)
    lam = 5.0
    got = spectral_projector_radial(lam, f)
    from hypfourier.specfun import spherical_batch

    want = (
        float(plancherel_density(lam, params))
        * complex(radial_ft_at(f, lam))
        * spherical_batch(lam, rg.nodes, params)
    )
    assert np.max(np.abs(got.values - want)) < 1e-10 * np.max(np.abs(want))


def test_laplacian_symbol():
    """Multiplying by lam^2 is applying -Delta - rho^2: the radial Laplacian
    f'' + 2 rho coth(r) f' of a Gaussian is available in closed form."""
    params = ModelParams(3)
    rg = radial_grid(12.0, 512)
    r = rg.nodes
    f = np.exp(-(r**2))
    sg = spectral_grid(24.0, 512)
    ft = forward_radial_ft(RadialFunction(rg, f, params), sg)
    got = inverse_radial_ft(
        SpectralFunction(sg, sg.nodes**2 * ft.values, params), rg
    ).values
    lap = (4.0 * r**2 - 2.0) * f + 2.0 * params.rho / np.tanh(r) * (-2.0 * r * f)
    want = -lap - params.rho**2 * f
    assert np.max(np.abs(got - want)) < 1e-10 * np.max(np.abs(want))


# ---------------------------------------------------------------------------
# extension / restriction guards
# ---------------------------------------------------------------------------


def test_extension_rejects_unresolved_phase():
    # 12 nodes cannot resolve the lam = 48 wave at r = 2: the realized
    # phase step between adjacent quadrature nodes is checked a posteriori
    params = ModelParams(2)
    g = SphereFunction(sphere_grid(params, 12), np.ones(12, dtype=complex))
    pts = ambient_from_polar_arrays(np.array([2.0]), np.array([1.0, 0.0]), params)
    with pytest.raises(AccuracyError):
        extension_operator(48.0, g, pts)


def test_extension_dimension_and_parameter_guards():
    params = ModelParams(4)
    g = SphereFunction(sphere_grid(ModelParams(2), 32), np.ones(32))
    pts = np.array([[1.0, 0.0, 0.0]])
    with pytest.raises(DomainError):
        extension_operator(2.0, SphereFunction(sphere_grid(params, 16, 16), np.ones(256)), pts)
    with pytest.raises(DomainError):
        extension_operator(-1.0, g, pts)


def test_knapp_cap_geometry():
    params = ModelParams(2)
    delta = 0.1
    cap = knapp_cap(params, delta, n=64)
    assert np.all(cap.values == 1.0)
    # all nodes within the delta-cap about e_1, measure = 2 delta
    assert float(np.min(cap.grid.nodes[:, 0])) > math.cos(delta)
    assert float(np.sum(cap.grid.weights)) == pytest.approx(2.0 * delta, rel=1e-12)


def test_knapp_cap_measure_d3():
    params = ModelParams(3)
    delta = 0.2
    cap = knapp_cap(params, delta, n=32, n_azimuth=48)
    want = 2.0 * math.pi * (1.0 - math.cos(delta))
    assert float(np.sum(cap.grid.weights)) == pytest.approx(want, rel=1e-10)


# ---------------------------------------------------------------------------
# resolvent symbols
# ---------------------------------------------------------------------------


def test_resolvent_params_validation():
    with pytest.raises(DomainError):
        ResolventParams(-1.0, 0.1)
    with pytest.raises(DomainError):
        ResolventParams(4.0, 0.0)
    assert ResolventParams(4.0, 0.5).z == complex(4.0, 0.5)


@given(
    st.floats(min_value=0.5, max_value=50.0),
    st.floats(min_value=0.01, max_value=2.0),
)
def test_resolvent_symbol_identities(tau, eps):
    rp = ResolventParams(tau, eps)
    lam = np.linspace(0.1, 30.0, 157)
    r = resolvent_symbol(rp).eval(lam)
    dr = dresolvent_symbol(rp).eval(lam)
    assert np.max(np.abs((lam**2 - rp.z) * r - 1.0)) < 1e-13
    assert np.max(np.abs(dr - lam * r)) < 1e-13


def test_dresolvent_symbol_is_odd():
    m = dresolvent_symbol(ResolventParams(4.0, 0.1))
    assert not m.even
    lam = np.array([0.7, 2.2])
    assert np.allclose(m.eval(-lam), -m.eval(lam))


# ---------------------------------------------------------------------------
# smoothing
# ---------------------------------------------------------------------------


def test_smoothing_exponent_branches():
    # p_ST = 4 at d = 3: gamma = 1 - d(1/2 - 1/p) above, the flatter
    # Stein-Tomas-limited ramp below
    se_hi = SmoothingExponent(6.0, 3)
    assert se_hi.gamma_p == pytest.approx(1.0 - 3.0 * (0.5 - 1.0 / 6.0))
    se_lo = SmoothingExponent(3.0, 3)
    assert se_lo.gamma_p == pytest.approx(0.5 - 1.0 * (0.5 - 1.0 / 3.0))
    assert se_lo.p_st == pytest.approx(4.0)


@given(st.integers(min_value=2, max_value=6))
def test_smoothing_exponent_branch_continuity(d):
    p_st = 2.0 * (d + 1) / (d - 1)
    lo = SmoothingExponent(p_st * (1.0 - 1e-10), d)
    hi = SmoothingExponent(p_st * (1.0 + 1e-10), d)
    assert abs(lo.gamma_p - hi.gamma_p) < 1e-9


def test_smoothing_exponent_validation():
    with pytest.raises(DomainError):
        SmoothingExponent(2.0, 3)
    with pytest.raises(DomainError):
        SmoothingExponent(4.0, 1)
    with pytest.raises(DomainError):
        SmoothingExponent(12.0, 3)  # 1/p' - 1/p beyond the 2/d window


def test_smoothing_functional_on_spectral_bump():
    params = ModelParams(3)
    sg = spectral_grid(16.0, 256, lambda_min=2.0)
    bump = np.exp(-((sg.nodes - 8.0) ** 2))
    ft = SpectralFunction(sg, bump, params)
    se = SmoothingExponent(3.0, 3)
    val = smoothing_functional(ft, se, rg=radial_grid(10.0, 256), check_weight=True)
    assert math.isfinite(val) and val > 0.0
    with pytest.raises(DomainError):
        smoothing_functional(ft, se, sg=spectral_grid(8.0, 64))
    with pytest.raises(DomainError):
        smoothing_functional(ft, SmoothingExponent(3.0, 2))


def test_restriction_needs_sphere_nodes():
    params = ModelParams(2)
    rg = radial_grid(4.0, 64)
    sg = sphere_grid(params, 32)
    from hypfourier import PolarSamples

    samples = PolarSamples(
        grid=rg,
        values=np.ones((rg.n, sg.n), dtype=complex),
        sphere_weights=sg.weights,
        params=params,
    )
    with pytest.raises(DomainError):
        restriction_operator_d2(2.0, samples, out_grid=sg)
