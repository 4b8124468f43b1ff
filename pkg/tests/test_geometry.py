"""Coordinate charts, the Lorentzian pairing, and the boundary action."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypfourier import ConsistencyError, DomainError, LorentzBoost, ModelParams
from hypfourier.geometry import (
    AmbientPoint,
    PolarPoint,
    ambient_from_iwasawa_arrays,
    ambient_from_polar_arrays,
    ambient_to_polar,
    boost_action,
    boundary_point,
    geodesic_distance,
    iwasawa_to_ambient,
    minkowski_form,
    plane_wave,
    polar_to_ambient,
)

radii = st.floats(min_value=0.0, max_value=10.0)
angles = st.floats(min_value=-math.pi, max_value=math.pi)
boost_params = st.floats(min_value=-2.5, max_value=2.5)
dims = st.integers(min_value=2, max_value=5)
lams = st.floats(min_value=0.1, max_value=32.0)


def circle_direction(theta: float, d: int) -> np.ndarray:
    w = np.zeros(d)
    w[0], w[1] = math.cos(theta), math.sin(theta)
    return w


@given(radii, angles, dims)
def test_polar_chart_lands_on_sheet(r, theta, d):
    params = ModelParams(d)
    x = polar_to_ambient(r, circle_direction(theta, d), params)
    # evaluating [x,x] in floats costs ~eps * x0^2 through the cosh^2 - sinh^2
    # cancellation, so the on-sheet budget scales with the point
    assert abs(minkowski_form(x.coords, x.coords) - 1.0) < 2e-14 * max(1.0, x.coords[0] ** 2)
    assert x.coords[0] >= 1.0


@given(radii, angles, dims)
def test_polar_round_trip(r, theta, d):
    params = ModelParams(d)
    omega = circle_direction(theta, d)
    back = ambient_to_polar(polar_to_ambient(r, omega, params))
    # acosh loses half the digits below sqrt(eps), and the sheet
    # renormalization moves r by ~eps cosh^2(r) / 2 at the far end
    assert back.r == pytest.approx(r, abs=2e-8 + 2e-14 * math.cosh(r) ** 2)
    if r > 1e-6:
        assert np.allclose(back.omega, omega, atol=1e-9)


@given(st.floats(-2.0, 2.0), st.floats(-3.0, 3.0), dims)
def test_iwasawa_chart_lands_on_sheet(s, v0, d):
    params = ModelParams(d)
    v = np.zeros(d - 1)
    v[0] = v0
    x = iwasawa_to_ambient(s, v, params)
    assert abs(minkowski_form(x.coords, x.coords) - 1.0) < 2e-14 * max(1.0, x.coords[0] ** 2)


def test_iwasawa_origin_is_base_point():
    params = ModelParams(3)
    x = iwasawa_to_ambient(0.0, np.zeros(2), params)
    assert np.allclose(x.coords, [1.0, 0.0, 0.0, 0.0])


def test_iwasawa_s_axis_is_a_geodesic():
    # v = 0 freezes the horocycle coordinate; s is then arclength from o
    params = ModelParams(2)
    for s in (-1.5, 0.25, 2.0):
        x = iwasawa_to_ambient(s, np.zeros(1), params)
        o = polar_to_ambient(0.0, np.array([1.0, 0.0]), params)
        assert geodesic_distance(o.coords, x.coords) == pytest.approx(abs(s), abs=1e-12)


@given(radii, angles, dims)
def test_distance_from_origin_is_polar_radius(r, theta, d):
    params = ModelParams(d)
    o = np.zeros(d + 1)
    o[0] = 1.0
    x = polar_to_ambient(r, circle_direction(theta, d), params)
    assert geodesic_distance(o, x.coords) == pytest.approx(r, abs=1e-7)


def test_distance_rejects_off_sheet_input():
    with pytest.raises(ConsistencyError):
        geodesic_distance(np.array([1.0, 0.0, 0.0]), np.array([0.5, 0.0, 0.0]))


def test_ambient_point_validates_sheet_membership():
    params = ModelParams(2)
    with pytest.raises(ConsistencyError):
        AmbientPoint(np.array([1.1, 0.0, 0.0]), params)
    with pytest.raises(ConsistencyError):
        AmbientPoint(np.array([-1.0, 0.0, 0.0]), params)
    with pytest.raises(DomainError):
        AmbientPoint(np.array([1.0, 0.0, 0.0, 0.0]), params)


def test_polar_point_rejects_negative_radius():
    with pytest.raises(DomainError):
        PolarPoint(-0.5, np.array([1.0, 0.0]), ModelParams(2))


@given(lams, radii, angles, dims)
def test_plane_wave_modulus(lam, r, theta, d):
    """|[x, b(omega)]^{i lam - rho}| = [x, b(omega)]^{-rho}."""
    params = ModelParams(d)
    omega = circle_direction(theta, d)
    x = polar_to_ambient(r, circle_direction(theta + 1.1, d), params)
    pair = float(minkowski_form(x.coords, boundary_point(omega)))
    w = plane_wave(lam, x.coords, omega, params)
    assert abs(w) == pytest.approx(pair**-params.rho, rel=1e-12)


def test_plane_wave_shape_validation():
    params = ModelParams(3)
    with pytest.raises(DomainError):
        plane_wave(1.0, np.array([1.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]), params)


@given(boost_params, dims)
def test_boost_preserves_minkowski_form(t, d):
    u = LorentzBoost(t, d).matrix
    eta = np.diag([1.0] + [-1.0] * d)
    assert np.allclose(u.T @ eta @ u, eta, atol=1e-12)


@given(boost_params, dims)
def test_boost_inverse_matrix(t, d):
    u = LorentzBoost(t, d)
    assert np.allclose(u.matrix @ u.inverse_matrix, np.eye(d + 1), atol=1e-12)


@given(boost_params, angles)
def test_boundary_action_round_trip(t, theta):
    """Pushing a direction forward and back returns it; the conformal
    factors of U and U^{-1} at matched directions are reciprocal."""
    u = LorentzBoost(t, 2)
    omega = circle_direction(theta, 2)
    moved, f1 = boost_action(u, omega)
    back, f2 = boost_action(LorentzBoost(-t, 2), moved)
    assert np.allclose(back, omega, atol=1e-10)
    assert f1 * f2 == pytest.approx(1.0, rel=1e-12)
    assert f1 > 0.0


@given(boost_params, angles, lams, radii)
def test_plane_wave_boost_covariance_pointwise(t, theta, lam, r):
    """[Ux, b(omega)] = factor * [x, b(omega')] with (omega', factor) the
    boundary action of U^{-1}: the algebraic seed of transform covariance."""
    params = ModelParams(2)
    u = LorentzBoost(t, 2)
    x = polar_to_ambient(r, circle_direction(theta + 0.4, 2), params)
    omega = circle_direction(theta, 2)
    moved, factor = boost_action(LorentzBoost(-t, 2), omega)
    lhs = plane_wave(lam, u.matrix @ x.coords, omega, params)
    rhs = factor ** (1j * lam - params.rho) * plane_wave(lam, x.coords, moved, params)
    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_vectorised_polar_chart_matches_scalar():
    params = ModelParams(3)
    r = np.array([0.0, 0.7, 2.4])
    omega = np.array([0.6, 0.0, 0.8])
    arr = ambient_from_polar_arrays(r, omega, params)
    for i, ri in enumerate(r):
        assert np.allclose(arr[i], polar_to_ambient(ri, omega, params).coords)


def test_vectorised_iwasawa_chart_matches_scalar():
    params = ModelParams(3)
    s = np.array([-1.0, 0.0, 1.3])
    v = np.array([[0.2, 0.0], [0.0, 0.0], [1.1, -0.4]])
    arr = ambient_from_iwasawa_arrays(s, v, params)
    for i in range(s.size):
        assert np.allclose(arr[i], iwasawa_to_ambient(s[i], v[i], params).coords)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sphere_area_constant(d):
    params = ModelParams(d)
    want = 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
    assert params.omega_sphere == pytest.approx(want, rel=1e-14)
    assert params.rho == pytest.approx((d - 1) / 2.0)


def test_model_params_rejects_low_dimension():
    with pytest.raises(DomainError):
        ModelParams(1)
