"""Hyperboloid model of real hyperbolic space H^d.

Points live on the upper sheet ``{x in R^{d+1} : [x,x] = 1, x0 > 0}`` of the
unit hyperboloid, where ``[x,y] = x0*y0 - x1*y1 - ... - xd*yd`` is the
Minkowski bilinear form.  The base point is ``o = (1, 0, ..., 0)``.

Two coordinate charts are provided:

* geodesic polar coordinates ``x = (cosh r, sinh r * omega)`` with
  ``omega`` on the unit sphere S^{d-1}, volume ``(sinh r)^{d-1} dr domega``;
* horospherical (Iwasawa) coordinates ``(s, v)`` with ``v in R^{d-1}``,

      x0 = cosh s + e^{-s} |v|^2 / 2
      x1 = sinh s + e^{-s} |v|^2 / 2
      x_{i+1} = e^{-s} v_i,

  volume ``e^{-2 rho s} dv ds`` with ``rho = (d-1)/2``.

Boundary points are rays on the forward light cone, parametrized as
``b(omega) = (1, omega)``.  The elementary plane waves

    h_{lam,omega}(x) = [x, b(omega)]^{i lam - rho}

are horospherical waves: constant on horospheres based at ``omega`` and
joint eigenfunctions of the invariant differential operators.  In Iwasawa
coordinates based at the first axis, ``h`` reduces to ``e^{(rho - i lam) s}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, DomainError

__all__ = [
    "ModelParams",
    "AmbientPoint",
    "PolarPoint",
    "IwasawaPoint",
    "LorentzBoost",
    "minkowski_form",
    "geodesic_distance",
    "polar_to_ambient",
    "ambient_to_polar",
    "iwasawa_to_ambient",
    "boundary_point",
    "plane_wave",
    "lorentz_boost",
    "boost_action",
    "ambient_from_polar_arrays",
    "ambient_from_iwasawa_arrays",
]

_ONSHEET_TOL = 1e-10


def _sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^n in R^{n+1}."""
    if n < 0:
        # S^{-1} is empty; by convention its "area" is 2 (counting measure on
        # {+1,-1} collapses to this in the d=1 chain), but we never use it.
        raise DomainError(f"no unit sphere of dimension {n}")
    return 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)


@dataclass(frozen=True)
class ModelParams:
    """Dimension-dependent constants of H^d.

    Attributes
    ----------
    d : int
        Dimension of the hyperbolic space, ``d >= 2``.
    rho : float
        Half the exponential volume growth rate, ``(d-1)/2``.
    omega_sphere : float
        Total measure of S^{d-1} (the sphere at infinity).
    omega_subsphere : float
        Total measure of S^{d-2}; shows up when an angular integral over
        S^{d-1} is reduced to a single polar angle.
    """

    d: int
    rho: float = field(init=False)
    omega_sphere: float = field(init=False)
    omega_subsphere: float = field(init=False)

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.d!r}")
        object.__setattr__(self, "rho", (self.d - 1) / 2.0)
        object.__setattr__(self, "omega_sphere", _sphere_area(self.d - 1))
        object.__setattr__(self, "omega_subsphere", _sphere_area(self.d - 2))

    @property
    def is_odd(self) -> bool:
        return self.d % 2 == 1


def minkowski_form(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Lorentzian pairing [x,y] = x0 y0 - x.y on the last axis."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x[..., 0] * y[..., 0] - np.sum(x[..., 1:] * y[..., 1:], axis=-1)


@dataclass
class AmbientPoint:
    """A point on the upper hyperboloid sheet, stored in ambient coordinates.

    Small numerical drift off the sheet (up to ``1e-10 * x0^2`` in
    ``[x,x] - 1`` — evaluating the form costs a relative ``x0^2`` through
    the cosh^2 - sinh^2 cancellation, so the budget must scale with it) is
    silently renormalized by rescaling; larger drift raises
    :class:`ConsistencyError` since it usually signals a bug upstream.
    """

    coords: np.ndarray
    params: ModelParams

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (self.params.d + 1,):
            raise DomainError(
                f"ambient point in H^{self.params.d} needs {self.params.d + 1} "
                f"coordinates, got shape {c.shape}"
            )
        q = minkowski_form(c, c)
        if q <= 0 or c[0] <= 0:
            raise ConsistencyError(
                f"point is not on the future sheet: [x,x]={q:.3e}, x0={c[0]:.3e}"
            )
        drift = abs(q - 1.0)
        budget = _ONSHEET_TOL * max(1.0, c[0] ** 2)
        if drift > budget:
            raise ConsistencyError(
                f"point drifted off the hyperboloid by {drift:.3e} (budget {budget:.3e})"
            )
        if drift > 0:
            c = c / math.sqrt(q)
        self.coords = c

    def distance_to(self, other: "AmbientPoint") -> float:
        return geodesic_distance(self.coords, other.coords)


@dataclass(frozen=True)
class PolarPoint:
    """Geodesic polar coordinates (r, omega) about the base point."""

    r: float
    omega: np.ndarray
    params: ModelParams

    def __post_init__(self):
        if self.r < 0:
            raise DomainError(f"radius must be nonnegative, got {self.r}")
        w = np.asarray(self.omega, dtype=float)
        if w.shape != (self.params.d,):
            raise DomainError(
                f"direction must lie in R^{self.params.d}, got shape {w.shape}"
            )
        nrm = float(np.linalg.norm(w))
        if abs(nrm - 1.0) > 1e-8:
            raise DomainError(f"direction must be a unit vector, |omega|={nrm}")
        object.__setattr__(self, "omega", w / nrm)

    def to_ambient(self) -> AmbientPoint:
        return polar_to_ambient(self.r, self.omega, self.params)


@dataclass(frozen=True)
class IwasawaPoint:
    """Horospherical coordinates (s, v), v in R^{d-1}."""

    s: float
    v: np.ndarray
    params: ModelParams

    def __post_init__(self):
        vv = np.atleast_1d(np.asarray(self.v, dtype=float))
        if vv.shape != (self.params.d - 1,):
            raise DomainError(
                f"horospherical v must lie in R^{self.params.d - 1}, got shape {vv.shape}"
            )
        object.__setattr__(self, "v", vv)

    def to_ambient(self) -> AmbientPoint:
        return iwasawa_to_ambient(self.s, self.v, self.params)


def geodesic_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Geodesic distance arccosh([x,y]) between two on-sheet points."""
    q = float(minkowski_form(x, y))
    if q < 1.0 - 1e-10:
        raise ConsistencyError(
            f"[x,y]={q!r} < 1; arguments are not both on the future sheet"
        )
    return math.acosh(max(q, 1.0))


def polar_to_ambient(r: float, omega: np.ndarray, params: ModelParams) -> AmbientPoint:
    omega = np.asarray(omega, dtype=float)
    c = np.empty(params.d + 1)
    c[0] = math.cosh(r)
    c[1:] = math.sinh(r) * omega
    return AmbientPoint(c, params)


def ambient_to_polar(point: AmbientPoint) -> PolarPoint:
    c = point.coords
    r = math.acosh(max(c[0], 1.0))
    spatial = c[1:]
    nrm = float(np.linalg.norm(spatial))
    if nrm < 1e-300:
        # at the base point the direction is arbitrary
        omega = np.zeros(point.params.d)
        omega[0] = 1.0
    else:
        omega = spatial / nrm
    return PolarPoint(r, omega, point.params)


def iwasawa_to_ambient(s: float, v: np.ndarray, params: ModelParams) -> AmbientPoint:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    half = 0.5 * math.exp(-s) * float(v @ v)
    c = np.empty(params.d + 1)
    c[0] = math.cosh(s) + half
    c[1] = math.sinh(s) + half
    c[2:] = math.exp(-s) * v
    return AmbientPoint(c, params)


def boundary_point(omega: np.ndarray) -> np.ndarray:
    """Light-cone representative b(omega) = (1, omega) of a boundary direction."""
    omega = np.asarray(omega, dtype=float)
    return np.concatenate(([1.0], omega))


def plane_wave(
    lam: float, x: np.ndarray, omega: np.ndarray, params: ModelParams
) -> np.ndarray:
    """Evaluate the horospherical wave [x, b(omega)]^{i lam - rho}.

    Parameters
    ----------
    lam : float
        Spectral parameter.
    x : array, shape (..., d+1)
        Ambient coordinates of points on the sheet (vectorized over
        leading axes).
    omega : array, shape (d,)
        Boundary direction.
    """
    x = np.asarray(x, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if x.shape[-1] != params.d + 1:
        raise DomainError(
            f"expected ambient coordinates with last axis {params.d + 1}, "
            f"got {x.shape}"
        )
    pair = x[..., 0] - x[..., 1:] @ omega
    if np.any(pair <= 0):
        raise ConsistencyError("[x, b(omega)] <= 0: point not on the future sheet")
    return np.exp((1j * lam - params.rho) * np.log(pair))


@dataclass(frozen=True)
class LorentzBoost:
    """Hyperbolic translation by t along the first spatial axis."""

    t: float
    d: int

    @property
    def matrix(self) -> np.ndarray:
        m = np.eye(self.d + 1)
        ch, sh = math.cosh(self.t), math.sinh(self.t)
        m[0, 0] = m[1, 1] = ch
        m[0, 1] = m[1, 0] = sh
        return m

    @property
    def inverse_matrix(self) -> np.ndarray:
        return LorentzBoost(-self.t, self.d).matrix


def lorentz_boost(t: float, d: int) -> LorentzBoost:
    return LorentzBoost(t, d)


def _lorentz_inverse(u: np.ndarray) -> np.ndarray:
    # For any matrix preserving the form, U^{-1} = eta U^T eta.
    eta = np.ones(u.shape[0])
    eta[1:] = -1.0
    return (eta[:, None] * u.T) * eta[None, :]


def boost_action(
    u: "LorentzBoost | np.ndarray", omega: np.ndarray
) -> tuple[np.ndarray, float]:
    """Action of an isometry on the sphere at infinity.

    Returns the moved direction ``omega'`` and the conformal factor
    ``[U^{-1} o, b(omega)]``, i.e. the 0-component of ``U b(omega)``.  That
    factor is exactly what multiplies the transform under composition:
    ``(f o U)^~(lam, omega) = factor^{i lam - rho} f^~(lam, omega')``.
    """
    mat = u.matrix if isinstance(u, LorentzBoost) else np.asarray(u, dtype=float)
    b = mat @ boundary_point(omega)
    factor = float(b[0])
    if factor <= 0:
        raise ConsistencyError("isometry does not preserve the forward cone")
    return b[1:] / factor, factor


def ambient_from_polar_arrays(
    r: np.ndarray, omega: np.ndarray, params: ModelParams
) -> np.ndarray:
    """Vectorized polar chart: r of shape (n,), omega of shape (d,) or (n, d)."""
    r = np.asarray(r, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if omega.ndim == 1:
        omega = np.broadcast_to(omega, r.shape + omega.shape)
    out = np.empty(r.shape + (params.d + 1,))
    out[..., 0] = np.cosh(r)
    out[..., 1:] = np.sinh(r)[..., None] * omega
    return out


def ambient_from_iwasawa_arrays(
    s: np.ndarray, v: np.ndarray, params: ModelParams
) -> np.ndarray:
    """Vectorized horospherical chart: s of shape (n,), v of shape (n, d-1)."""
    s = np.asarray(s, dtype=float)
    v = np.asarray(v, dtype=float)
    if v.ndim == 1:
        v = v[:, None] if params.d == 2 else np.broadcast_to(v, s.shape + v.shape)
    half = 0.5 * np.exp(-s) * np.sum(v * v, axis=-1)
    out = np.empty(s.shape + (params.d + 1,))
    out[..., 0] = np.cosh(s) + half
    out[..., 1] = np.sinh(s) + half
    out[..., 2:] = np.exp(-s)[..., None] * v
    return out
