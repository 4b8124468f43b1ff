"""Lebesgue norms in the polar and horocyclic charts, and power-law fitting.

Volume elements used here:

* polar:       dx = (sinh r)^{2 rho} dr domega,
* horocyclic:  dx = e^{-(d-1) s} dv ds  for the chart (s, v) in R x R^{d-1}.

Radial integrals over the full space are necessarily truncated at the grid's
r_max, and whether that truncation is harmless depends on the tail of the
integrand.  ``lp_norm_polar`` therefore inspects the tail: a decaying tail is
extrapolated geometrically, a non-decaying one turns the result into an
explicit ``math.inf`` marker (with the fitted tail rate available through
``with_diagnostics=True``) instead of a silently finite number.  Norms that
are *meant* to be taken over a bounded ball use ``tail="truncate"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .geometry import ModelParams
from .specfun import _log_sinh
from .transform import RadialFunction, RadialGrid, _composite_gl

__all__ = [
    "IwasawaBox",
    "PolarSamples",
    "ScalingFit",
    "TailDiagnostics",
    "fit_scaling_exponent",
    "lp_norm_iwasawa",
    "lp_norm_polar",
    "sphere_lp_norm",
]


# ---------------------------------------------------------------------------
# Result / input containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailDiagnostics:
    """What the last quarter of the radial grid looked like.

    decay_rate is the fitted d/dr of log(local integrand mass); negative
    means the contribution still decays at the edge of the grid.
    """

    decay_rate: float
    tail_fraction: float
    divergent: bool
    tail_estimate: float


@dataclass(frozen=True)
class PolarSamples:
    """Samples f(r_i, omega_j) of a not-necessarily-radial function.

    ``sphere_weights`` must carry the full surface measure (they sum to
    omega_{d-1}); the radial quadrature comes from ``grid``.  The node
    directions themselves are only needed by consumers that evaluate plane
    waves (the d = 2 restriction operator, pairings), so ``sphere_nodes``
    is optional: shape (n_sphere, d) with unit rows when present.
    """

    grid: RadialGrid
    values: np.ndarray
    sphere_weights: np.ndarray
    params: ModelParams
    sphere_nodes: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values)
        w = np.asarray(self.sphere_weights, dtype=float)
        if v.ndim != 2 or v.shape[0] != self.grid.n or v.shape[1] != w.size:
            raise DomainError("values must have shape (n_r, n_sphere)")
        if np.any(w <= 0):
            raise DomainError("sphere weights must be positive")
        if abs(w.sum() - self.params.omega_sphere) > 1e-8 * self.params.omega_sphere:
            raise DomainError("sphere weights must sum to the full sphere measure")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sphere_weights", w)
        if self.sphere_nodes is not None:
            nodes = np.asarray(self.sphere_nodes, dtype=float)
            if nodes.shape != (w.size, self.params.d):
                raise DomainError("sphere nodes must have shape (n_sphere, d)")
            if np.max(np.abs((nodes**2).sum(axis=1) - 1.0)) > 1e-12:
                raise DomainError("sphere nodes must be unit vectors")
            object.__setattr__(self, "sphere_nodes", nodes)


@dataclass(frozen=True)
class IwasawaBox:
    """A product region [s_lo, s_hi] x {v_lo <= |v| <= v_hi} in the (s, v) chart.

    For d = 2 the second factor is the plain interval [v_lo, v_hi] (v_lo may
    be negative); for d >= 3 it is the annulus v_lo <= |v| <= v_hi, so both
    bounds must be nonnegative.
    """

    s_lo: float
    s_hi: float
    v_lo: float
    v_hi: float

    def __post_init__(self):
        if not (self.s_lo < self.s_hi) or not (self.v_lo < self.v_hi):
            raise DomainError("box bounds must be ordered")


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares power law through (lambda, value) points, in log-log."""

    slope: float
    intercept: float
    max_residual: float
    points: tuple

    def predicted(self, lam: float) -> float:
        return math.exp(self.intercept) * lam**self.slope


# ---------------------------------------------------------------------------
# Polar-chart norms
# ---------------------------------------------------------------------------

_TAIL_WINDOWS = 4
_TAIL_ZERO = 1e-12  # edge values below this (relative) mean compact support


def _tail_behaviour(r: np.ndarray, contrib: np.ndarray) -> TailDiagnostics:
    """Fit the decay of the per-node contributions over the last grid quarter."""
    n = r.size
    total = float(contrib.sum())
    lo = (3 * n) // 4
    idx = np.array_split(np.arange(lo, n), _TAIL_WINDOWS)
    masses = np.array([contrib[i].sum() for i in idx])
    centers = np.array([r[i].mean() for i in idx])
    tail_fraction = float(masses.sum() / total) if total > 0 else 0.0

    positive = masses > 0
    if positive.sum() >= 2:
        rate = float(np.polyfit(centers[positive], np.log(masses[positive]), 1)[0])
    else:
        rate = -math.inf  # the tail is identically zero

    # Non-decaying tail that still carries mass: the extended integral cannot
    # converge.  (Oscillation is averaged out by the window masses.)
    divergent = rate > -1e-3 and tail_fraction > _TAIL_ZERO

    tail_estimate = 0.0
    if not divergent and masses[-1] > 0 and masses[-2] > masses[-1]:
        q = masses[-1] / masses[-2]
        tail_estimate = float(masses[-1] * q / (1.0 - q))
    return TailDiagnostics(rate, tail_fraction, divergent, tail_estimate)


def _polar_pieces(f, p: float):
    """Return (r, radial quadrature contributions, sup of |f|) for either input kind."""
    if isinstance(f, RadialFunction):
        absv = np.abs(f.values)
        angular = f.params.omega_sphere * absv**p
        grid = f.grid
        params = f.params
    elif isinstance(f, PolarSamples):
        absv = np.abs(f.values)
        angular = (absv**p) @ f.sphere_weights
        grid = f.grid
        params = f.params
    else:
        raise DomainError(f"cannot take a polar norm of {type(f).__name__}")
    r = grid.nodes
    with np.errstate(over="raise"):
        try:
            contrib = grid.weights * angular * np.exp(2.0 * params.rho * _log_sinh(r))
        except FloatingPointError:
            raise AccuracyError("volume weight overflow; rescale the function first")
    return r, contrib, float(absv.max(initial=0.0))


def lp_norm_polar(f, p: float, *, tail: str = "auto", with_diagnostics: bool = False):
    """L^p norm of ``f`` on H^d in geodesic polar coordinates.

    ``f`` is a RadialFunction or PolarSamples.  ``tail`` controls the
    reading of the truncation at ``r_max``:

    * ``"auto"``      -- treat samples that vanish at the edge as compactly
                         supported; otherwise analyse the tail, extrapolate a
                         decaying one and report ``math.inf`` for a
                         non-decaying one;
    * ``"truncate"``  -- the domain of integration *is* the ball r <= r_max.

    With ``with_diagnostics=True`` returns ``(value, TailDiagnostics)``.
    """
    if p != math.inf and p < 1:
        raise DomainError(f"p must be >= 1 or inf, got {p}")
    if tail not in ("auto", "truncate"):
        raise DomainError(f"unknown tail mode {tail!r}")

    if p == math.inf:
        if isinstance(f, (RadialFunction, PolarSamples)):
            value = float(np.abs(f.values).max(initial=0.0))
        else:
            raise DomainError(f"cannot take a polar norm of {type(f).__name__}")
        diag = TailDiagnostics(0.0, 0.0, False, 0.0)
        return (value, diag) if with_diagnostics else value

    r, contrib, sup = _polar_pieces(f, p)
    total = float(contrib.sum())
    if total == 0.0:
        diag = TailDiagnostics(-math.inf, 0.0, False, 0.0)
        return (0.0, diag) if with_diagnostics else 0.0

    diag = _tail_behaviour(r, contrib)
    if tail == "truncate":
        value = total ** (1.0 / p)
        out_diag = TailDiagnostics(diag.decay_rate, diag.tail_fraction, False, 0.0)
        return (value, out_diag) if with_diagnostics else value

    # Compactly supported samples: the last window is empty relative to the peak.
    edge = contrib[(15 * r.size) // 16 :]
    if sup > 0 and float(edge.max(initial=0.0)) <= (_TAIL_ZERO * sup) ** p:
        value = total ** (1.0 / p)
        return (value, diag) if with_diagnostics else value

    if diag.divergent:
        return (math.inf, diag) if with_diagnostics else math.inf
    value = (total + diag.tail_estimate) ** (1.0 / p)
    return (value, diag) if with_diagnostics else value


# ---------------------------------------------------------------------------
# Horocyclic-chart norms
# ---------------------------------------------------------------------------


def lp_norm_iwasawa(
    F,
    p: float,
    box: IwasawaBox,
    params: ModelParams,
    *,
    n_s: int = 192,
    n_v: int = 192,
) -> float:
    """L^p norm of ``F(s, v)`` over an IwasawaBox.

    ``F`` must accept broadcast arrays (s of shape (n_s, 1), v of shape
    (1, n_v)); for d >= 3 the second argument is the modulus |v| and F is
    assumed rotation-invariant in v (all the box regions used here are).
    """
    if p != math.inf and p < 1:
        raise DomainError(f"p must be >= 1 or inf, got {p}")
    d = params.d
    if d >= 3 and box.v_lo < 0:
        raise DomainError("for d >= 3 the box bounds refer to |v| and must be >= 0")

    s_nodes, s_wts = _composite_gl(box.s_lo, box.s_hi, n_s)
    v_nodes, v_wts = _composite_gl(box.v_lo, box.v_hi, n_v)
    vals = np.abs(F(s_nodes[:, None], v_nodes[None, :]))
    if p == math.inf:
        return float(vals.max(initial=0.0))

    if d == 2:
        v_meas = v_wts
    else:
        v_meas = params.omega_subsphere * v_nodes ** (d - 2) * v_wts
    s_meas = np.exp(-(d - 1) * s_nodes) * s_wts
    total = float(s_meas @ (vals**p) @ v_meas)
    return total ** (1.0 / p)


# ---------------------------------------------------------------------------
# Sphere norms
# ---------------------------------------------------------------------------


def sphere_lp_norm(g, p: float) -> float:
    """L^p(S^{d-1}, domega) norm; ``g`` is a SphereFunction or (values, weights)."""
    if hasattr(g, "values") and hasattr(g, "grid"):
        values, weights = g.values, g.grid.weights
    else:
        values, weights = g
    values = np.asarray(values)
    weights = np.asarray(weights, dtype=float)
    if p == math.inf:
        return float(np.abs(values).max(initial=0.0))
    if p < 1:
        raise DomainError(f"p must be >= 1 or inf, got {p}")
    return float(np.abs(values) ** p @ weights) ** (1.0 / p)


# ---------------------------------------------------------------------------
# Scaling-exponent fits
# ---------------------------------------------------------------------------

_MIN_SPREAD = 4.0


def fit_scaling_exponent(points) -> ScalingFit:
    """Least-squares power-law fit value ~ C * lambda^slope.

    Requires at least three points, strictly positive finite values, and a
    lambda spread of at least a factor 4 (slopes from narrower spans are too
    ill-conditioned to be meaningful).
    """
    pts = tuple((float(l), float(v)) for l, v in points)
    if len(pts) < 3:
        raise DomainError(f"need at least 3 points for a fit, got {len(pts)}")
    lam = np.array([l for l, _ in pts])
    val = np.array([v for _, v in pts])
    if np.any(lam <= 0):
        raise DomainError("lambda values must be positive")
    if np.any(~np.isfinite(val)) or np.any(val <= 0):
        raise DomainError("fit requires finite positive values (divergent norm in input?)")
    if lam.max() < _MIN_SPREAD * lam.min() * (1.0 - 1e-12):
        raise DomainError("lambda spread must cover at least a factor 4")
    x, y = np.log(lam), np.log(val)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return ScalingFit(float(slope), float(intercept), float(np.abs(resid).max()), pts)
