"""Operators applied to concrete functions.

Spectral projector on radial inputs, the extension/restriction pair between
the sphere at infinity and the space, resolvent-type spectral multipliers,
and the Schrodinger smoothing functional.

Normalization conventions, fixed here once:

* extension:    E_lam g(x) = |c(lam)|^{-1} (1/omega_{d-1}) int g(w) conj(h_{lam,w}(x)) dw
* restriction:  R_lam f(w) = |c(lam)|^{-1} f-tilde(lam, w)
* projector on radial f:  P_lam f = |c(lam)|^{-2} f-tilde(lam) Phi_lam

so that <R_lam f, g> with respect to dw/omega_{d-1} equals <f, E_lam g>, and
the pairing int (P_lam f) conj(g) dx = |c|^{-2} f-tilde(lam) conj(g-tilde(lam))
holds for radial f, g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, ConsistencyError, DomainError
from .geometry import AmbientPoint, ModelParams
from .norms import PolarSamples, lp_norm_polar
from .specfun import plancherel_density, spherical_batch
from .transform import (
    MultiplierSymbol,
    RadialFunction,
    RadialGrid,
    SpectralFunction,
    SpectralGrid,
    _composite_gl,
    _phi_matrix,
    forward_radial_ft,
    inverse_radial_ft,
    radial_ft_at,
    radial_grid,
    spectral_grid,
)

__all__ = [
    "ResolventParams",
    "SmoothingExponent",
    "SphereFunction",
    "SphereGrid",
    "apply_multiplier",
    "cap_grid",
    "cap_measure",
    "dresolvent_symbol",
    "extension_operator",
    "knapp_cap",
    "resolvent_symbol",
    "restriction_operator_d2",
    "smoothing_functional",
    "spectral_projector_radial",
    "sphere_grid",
    "time_l2_bruteforce",
]


# ---------------------------------------------------------------------------
# Sphere grids and functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature nodes on S^{d-1} carrying the surface measure.

    ``coverage`` is "sphere" for full-sphere rules (weights sum to
    omega_{d-1}, checked) or "cap" for rules supported on a spherical cap
    (weights sum to the cap measure).  ``angular_scale`` is the coarsest
    angular node spacing; extension/restriction use it to refuse grids that
    cannot resolve the requested plane-wave oscillation.  Product grids on
    S^2 set ``ring_len`` (nodes per azimuthal ring, rings contiguous and
    aligned in azimuth) so the extension operator can check realized phase
    steps along both angular directions instead of the worst case.
    """

    params: ModelParams
    nodes: np.ndarray
    weights: np.ndarray
    angular_scale: float
    coverage: str = "sphere"
    ring_len: int | None = None

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != self.params.d or nodes.shape[0] != w.size:
            raise DomainError("nodes must have shape (n, d) matching the weights")
        if self.ring_len is not None and w.size % self.ring_len:
            raise DomainError("ring_len must divide the node count")
        if np.max(np.abs((nodes**2).sum(axis=1) - 1.0)) > 1e-12:
            raise DomainError("sphere nodes must be unit vectors")
        if np.any(w <= 0):
            raise DomainError("sphere weights must be positive")
        if self.coverage == "sphere":
            omega = self.params.omega_sphere
            if abs(w.sum() - omega) > 1e-10 * omega:
                raise DomainError("full-sphere weights must sum to omega_{d-1}")
        elif self.coverage != "cap":
            raise DomainError(f"unknown coverage {self.coverage!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.size


@dataclass
class SphereFunction:
    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.n,):
            raise DomainError("values must be sampled on the grid nodes")
        if not np.all(np.isfinite(v)):
            raise DomainError("values must be finite")
        self.values = v


def sphere_grid(params: ModelParams, n: int, n_azimuth: int | None = None) -> SphereGrid:
    """Full-sphere quadrature.

    d = 2: n equispaced angles (trapezoid rule, spectrally accurate).
    d = 3: n Gauss-Legendre nodes in cos(polar) times a trapezoid rule with
    ``n_azimuth`` (default 2n) angles.
    """
    if n < 4:
        raise DomainError("need at least 4 nodes")
    if params.d == 2:
        th = 2.0 * math.pi * np.arange(n) / n
        nodes = np.stack([np.cos(th), np.sin(th)], axis=1)
        weights = np.full(n, 2.0 * math.pi / n)
        return SphereGrid(params, nodes, weights, 2.0 * math.pi / n)
    if params.d == 3:
        n_az = n_azimuth or 2 * n
        t, wt = np.polynomial.legendre.leggauss(n)
        phi = 2.0 * math.pi * np.arange(n_az) / n_az
        st = np.sqrt(1.0 - t**2)
        nodes = np.stack(
            [
                np.repeat(t, n_az),
                np.repeat(st, n_az) * np.tile(np.cos(phi), n),
                np.repeat(st, n_az) * np.tile(np.sin(phi), n),
            ],
            axis=1,
        )
        weights = np.repeat(wt, n_az) * (2.0 * math.pi / n_az)
        scale = max(math.pi / n, 2.0 * math.pi / n_az)
        return SphereGrid(params, nodes, weights, scale, ring_len=n_az)
    raise DomainError("sphere grids are implemented for d in {2, 3}")


def cap_grid(
    params: ModelParams, delta: float, n: int, n_azimuth: int | None = None
) -> SphereGrid:
    """Quadrature of the spherical cap {angle(w, e_1) <= delta}."""
    if not 0 < delta < math.pi / 2:
        raise DomainError("cap aperture must lie in (0, pi/2)")
    if params.d == 2:
        th, w = _composite_gl(-delta, delta, max(n, 16))
        nodes = np.stack([np.cos(th), np.sin(th)], axis=1)
        gaps = np.diff(np.sort(th))
        return SphereGrid(params, nodes, w, float(gaps.max()), coverage="cap")
    if params.d == 3:
        n_az = n_azimuth or max(16, n)
        # Gauss-Legendre in t = cos(polar angle) integrates the measure
        # dt dphi exactly over the cap
        t, wt = np.polynomial.legendre.leggauss(max(n, 8))
        lo = math.cos(delta)
        t = lo + 0.5 * (t + 1.0) * (1.0 - lo)
        wt = wt * 0.5 * (1.0 - lo)
        phi = 2.0 * math.pi * np.arange(n_az) / n_az
        st = np.sqrt(np.clip(1.0 - t**2, 0.0, None))
        nodes = np.stack(
            [
                np.repeat(t, n_az),
                np.repeat(st, n_az) * np.tile(np.cos(phi), t.size),
                np.repeat(st, n_az) * np.tile(np.sin(phi), t.size),
            ],
            axis=1,
        )
        weights = np.repeat(wt, n_az) * (2.0 * math.pi / n_az)
        polar = np.sort(np.arccos(np.clip(t, -1.0, 1.0)))
        gap = max(
            float(np.diff(polar).max(initial=delta / t.size)),
            2.0 * math.pi / n_az * math.sin(delta),
        )
        return SphereGrid(params, nodes, weights, gap, coverage="cap", ring_len=n_az)
    raise DomainError("cap grids are implemented for d in {2, 3}")


def cap_measure(params: ModelParams, delta: float) -> float:
    """Surface measure of the cap of aperture delta (exact)."""
    if params.d == 2:
        return 2.0 * delta
    if params.d == 3:
        return 2.0 * math.pi * (1.0 - math.cos(delta))
    # angle integral omega_{d-2} int_0^delta sin^{d-2}
    th, w = _composite_gl(0.0, delta, 64)
    return params.omega_subsphere * float(np.sin(th) ** (params.d - 2) @ w)


def knapp_cap(params: ModelParams, delta: float, n: int = 64, n_azimuth: int | None = None) -> SphereFunction:
    """Indicator of the delta-cap around e_1, carried on its own cap quadrature."""
    grid = cap_grid(params, delta, n, n_azimuth)
    return SphereFunction(grid, np.ones(grid.n))


# ---------------------------------------------------------------------------
# Extension / restriction
# ---------------------------------------------------------------------------

_MAX_PHASE_STEP = 2.0 * math.pi / 8.0  # >= 8 quadrature nodes per realized period
_NEGLIGIBLE = 1e-8


def _ambient_array(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = points
    else:
        arr = np.array(
            [p.coords if isinstance(p, AmbientPoint) else np.asarray(p) for p in points]
        )
    if arr.ndim == 1:
        arr = arr[None, :]
    return np.asarray(arr, dtype=float)


def _phase_step(lam: float, log_pair: np.ndarray, axis: int, mask: np.ndarray | None = None) -> float:
    """Largest realized phase increment lam * |Delta log pair| between
    angularly adjacent quadrature nodes (along ``axis``)."""
    step = lam * np.abs(np.diff(log_pair, axis=axis))
    if mask is not None:
        step = step * mask
    return float(step.max(initial=0.0))


def extension_operator(lam: float, g: SphereFunction, points) -> np.ndarray:
    """E_lam g sampled at ambient points; d in {2, 3}.

    The sphere grid must resolve the plane-wave oscillation actually seen at
    the requested points.  That is checked a posteriori on the realized
    phase increments between adjacent nodes (the a-priori worst case
    lam*sinh(r) is far too pessimistic for points nearly aligned with a
    cap, which is the entire point of the Knapp family); an AccuracyError
    is raised instead of returning quadrature noise.
    """
    params = g.grid.params
    if params.d not in (2, 3):
        raise DomainError("extension operator implemented for d in {2, 3}")
    if lam <= 0:
        raise DomainError("need lam > 0")
    x = _ambient_array(points)
    if x.shape[1] != params.d + 1:
        raise DomainError(f"points must have {params.d + 1} ambient coordinates")

    rings = g.grid.ring_len if params.d == 3 else None
    if params.d == 3 and rings is None:
        # no ring structure means no angular ordering to difference along;
        # fall back on the worst-case phase rate lam*sinh(r) per unit angle
        r_max = float(np.arccosh(np.clip(x[:, 0], 1.0, None)).max())
        rate = lam * math.sinh(r_max) * g.grid.angular_scale
        if rate > _MAX_PHASE_STEP:
            raise AccuracyError(
                f"sphere grid too coarse for lam = {lam:g} at r <= {r_max:.3g}",
                achieved=rate,
            )

    inv_c = math.sqrt(float(plancherel_density(lam, params)))
    gw = g.grid.weights * g.values
    gmask = np.abs(g.values) > _NEGLIGIBLE * max(float(np.abs(g.values).max()), 1e-300)
    out = np.empty(x.shape[0], dtype=complex)
    worst = 0.0
    for lo in range(0, x.shape[0], 4096):
        blk = x[lo : lo + 4096]
        pair = blk[:, :1] - blk[:, 1:] @ g.grid.nodes.T
        if pair.min() <= 0:
            raise ConsistencyError("nonpositive Minkowski pairing; points must be on-sheet")
        log_pair = np.log(pair)
        if params.d == 2:
            # circle and cap grids are ordered by angle, so consecutive
            # columns are genuine angular neighbours
            amask = (gmask[:-1] & gmask[1:])[None, :]
            worst = max(worst, _phase_step(lam, log_pair, 1, amask))
        elif rings is not None:
            # contiguous azimuthal rings aligned in azimuth: difference
            # within each ring and between rings at fixed azimuth
            lp = log_pair.reshape(blk.shape[0], -1, rings)
            gm = gmask.reshape(-1, rings)
            worst = max(worst, _phase_step(lam, lp, 2, (gm[:, :-1] & gm[:, 1:])[None]))
            worst = max(worst, _phase_step(lam, lp, 1, (gm[:-1] & gm[1:])[None]))
        out[lo : lo + 4096] = np.exp((-1j * lam - params.rho) * log_pair) @ gw
    if worst > _MAX_PHASE_STEP:
        raise AccuracyError(
            f"sphere grid too coarse for lam = {lam:g}: realized phase step "
            f"{worst:.3f} rad exceeds {_MAX_PHASE_STEP:.3f}",
            achieved=worst,
        )
    return (inv_c / params.omega_sphere) * out


def restriction_operator_d2(lam: float, f: PolarSamples, out_grid: SphereGrid | None = None) -> SphereFunction:
    """R_lam f = |c|^{-1} f-tilde(lam, .) by direct polar quadrature on H^2."""
    params = f.params
    if params.d != 2:
        raise DomainError("the general restriction operator is implemented for d = 2")
    if lam <= 0:
        raise DomainError("need lam > 0")
    if f.sphere_nodes is None:
        raise DomainError("restriction needs PolarSamples with sphere_nodes")
    r = f.grid.nodes
    ang = np.arctan2(f.sphere_nodes[:, 1], f.sphere_nodes[:, 0])
    gaps = np.diff(ang)
    gaps[gaps < -math.pi] += 2.0 * math.pi  # branch-cut wraparound
    if np.any(gaps <= 0):
        raise DomainError("restriction expects sphere nodes ordered by angle")
    # only rows/columns carrying mass constrain the resolution
    absf = np.abs(f.values)
    fmask = absf > _NEGLIGIBLE * max(float(absf.max()), 1e-300)
    if not fmask.any():
        zero = out_grid or sphere_grid(params, f.sphere_nodes.shape[0])
        return SphereFunction(zero, np.zeros(zero.n, dtype=complex))
    r_eff = float(r[fmask.any(axis=1)].max())
    dr = float(np.diff(r).max())
    if lam * dr > _MAX_PHASE_STEP:  # |d log pair / dr| <= 1
        raise AccuracyError("polar grid too coarse in r for this lam", achieved=lam * dr)
    if lam * math.sinh(r_eff) * float(gaps.max()) > _MAX_PHASE_STEP:
        raise AccuracyError(
            f"polar grid too coarse in theta for lam = {lam:g} at r <= {r_eff:.3g}"
        )

    if out_grid is None:
        out_grid = sphere_grid(params, f.sphere_nodes.shape[0])
    # weight matrix of the 2-d quadrature: wr_i sinh(r_i) wth_j f_ij
    base = (f.grid.weights * np.sinh(r))[:, None] * f.sphere_weights[None, :] * f.values
    cosh_r = np.cosh(r)[:, None]
    sinh_r = np.sinh(r)[:, None]
    inv_c = math.sqrt(float(plancherel_density(lam, params)))
    out = np.empty(out_grid.n, dtype=complex)
    for k in range(out_grid.n):
        pair = cosh_r - sinh_r * (f.sphere_nodes @ out_grid.nodes[k])[None, :]
        out[k] = np.sum(base * np.exp((1j * lam - params.rho) * np.log(pair)))
    return SphereFunction(out_grid, inv_c * out)


# ---------------------------------------------------------------------------
# Spectral projector and multipliers
# ---------------------------------------------------------------------------


def spectral_projector_radial(lam: float, f: RadialFunction) -> RadialFunction:
    """P_lam f = |c(lam)|^{-2} f-tilde(lam) Phi_lam for radial f."""
    if lam <= 0:
        raise DomainError("need lam > 0")
    params = f.params
    dens = float(plancherel_density(lam, params))
    coeff = dens * radial_ft_at(f, lam)
    phi = spherical_batch(float(lam), f.grid.nodes, params)
    return RadialFunction(f.grid, coeff * phi, params)


def _default_spectral_grid(f: RadialFunction, lambda_max: float = 48.0) -> SpectralGrid:
    # ~12 nodes per period of the fastest Phi oscillation the grid can carry
    n = max(512, int(12.0 * lambda_max * f.grid.r_max / (2.0 * math.pi)))
    return spectral_grid(lambda_max, n)


def apply_multiplier(
    m: MultiplierSymbol, f: RadialFunction, sg: SpectralGrid | None = None
) -> RadialFunction:
    """m(D) f = inverse transform of m * f-tilde (radial functional calculus)."""
    if sg is None:
        sg = _default_spectral_grid(f)
    ft = forward_radial_ft(f, sg)
    mvals = np.asarray(m.eval(sg.nodes))
    out = SpectralFunction(sg, mvals * ft.values, f.params)
    return inverse_radial_ft(out, f.grid)


@dataclass(frozen=True)
class ResolventParams:
    """Spectral parameter z = tau + i eps of (D^2 - z)^{-1}, tau, eps > 0."""

    tau: float
    eps: float

    def __post_init__(self):
        if self.tau <= 0 or self.eps <= 0:
            raise DomainError("need tau > 0 and eps > 0")

    @property
    def z(self) -> complex:
        return complex(self.tau, self.eps)


def resolvent_symbol(rp: ResolventParams) -> MultiplierSymbol:
    """lam -> 1/(lam^2 - z); real part (lam^2-tau)/((lam^2-tau)^2+eps^2), imaginary part eps/(...)."""
    z = rp.z

    def _eval(lam):
        return 1.0 / (np.asarray(lam) ** 2 - z)

    return MultiplierSymbol(eval=_eval, even=True, label=f"resolvent(tau={rp.tau:g}, eps={rp.eps:g})")


def dresolvent_symbol(rp: ResolventParams) -> MultiplierSymbol:
    """lam -> lam/(lam^2 - z), the symbol of D (D^2 - z)^{-1} (odd, so no kernel synthesis)."""
    z = rp.z

    def _eval(lam):
        lam = np.asarray(lam)
        return lam / (lam**2 - z)

    return MultiplierSymbol(
        eval=_eval, even=False, label=f"dresolvent(tau={rp.tau:g}, eps={rp.eps:g})"
    )


# ---------------------------------------------------------------------------
# Schrodinger smoothing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothingExponent:
    """The derivative gain gamma_p of the homogeneous Schrodinger flow.

    gamma_p = 1 - d (1/2 - 1/p)              for p >  p_ST,
    gamma_p = 1/2 - (d-1)/2 (1/2 - 1/p)      for 2 < p <= p_ST,

    restricted (d >= 3) to 1/p' - 1/p <= 2/d.  Both branches agree at p_ST;
    this is asserted at construction.
    """

    p: float
    d: int
    p_st: float = field(init=False)
    gamma_p: float = field(init=False)

    def __post_init__(self):
        if self.p <= 2:
            raise DomainError("need p > 2")
        if self.d < 2:
            raise DomainError("need d >= 2")
        if self.d >= 3 and (1.0 - 2.0 / self.p) > 2.0 / self.d + 1e-15:
            raise DomainError("p outside the admissible range 1/p' - 1/p <= 2/d")
        p_st = 2.0 * (self.d + 1) / (self.d - 1)
        high = lambda p: 1.0 - self.d * (0.5 - 1.0 / p)  # noqa: E731
        low = lambda p: 0.5 - 0.5 * (self.d - 1) * (0.5 - 1.0 / p)  # noqa: E731
        if abs(high(p_st) - low(p_st)) > 1e-12:
            raise ConsistencyError("gamma_p branches disagree at p_ST")
        object.__setattr__(self, "p_st", p_st)
        object.__setattr__(self, "gamma_p", high(self.p) if self.p > p_st else low(self.p))


def time_l2_bruteforce(a_nodes: np.ndarray, a_weights: np.ndarray, a_values: np.ndarray, t_max: float, n_t: int) -> float:
    """int_{-T}^{T} | int e^{i t lam^2} a(lam) dlam |^2 dt by direct quadrature."""
    t, wt = _composite_gl(-t_max, t_max, n_t)
    phases = np.exp(1j * t[:, None] * a_nodes[None, :] ** 2)
    u = phases @ (a_weights * a_values)
    return float(wt @ np.abs(u) ** 2)


def smoothing_functional(
    f: RadialFunction | SpectralFunction,
    se: SmoothingExponent,
    sg: SpectralGrid | None = None,
    *,
    rg: RadialGrid | None = None,
    check_weight: bool = True,
    weight_tol: float = 1e-4,
) -> float:
    """|| D^{gamma_p} e^{it Delta} f ||_{L^p_x L^2_t} via Plancherel in time.

    For each grid radius the squared time-L^2 norm of
    u(t, x) = int_0^infty e^{i t lam^2} a_x(lam) dlam, with
    a_x = lam^{gamma_p} f-tilde(lam) Phi_lam(x) |c(lam)|^{-2}, equals
    pi int |a_x|^2 dlam / lam (substitute mu = lam^2 and use Plancherel).
    With check_weight the pi/lam weight is re-derived by brute-force time
    quadrature on a canonical bump and a ConsistencyError is raised on
    disagreement beyond weight_tol.

    ``f`` may be given in physical space (forward-transformed here, which
    requires the radial grid to certify its tail against the e^{2 rho r}
    volume growth) or directly in spectral space, in which case ``rg`` sets
    the radial grid for the outer L^p_x norm (default r_max 12).
    """
    params = f.params
    if params.d != se.d:
        raise DomainError("exponent table and function dimension disagree")
    if params.d not in (2, 3):
        raise DomainError("smoothing functional implemented for d in {2, 3}")
    if isinstance(f, SpectralFunction):
        if sg is not None and sg is not f.grid:
            raise DomainError("spectral input carries its own grid; drop sg")
        sg = f.grid
        ft = f
        if rg is None:
            rg = radial_grid(12.0, 512)
    else:
        if sg is None:
            sg = _default_spectral_grid(f)
        rg = f.grid
        ft = None
    if check_weight:
        _check_time_weight(weight_tol)
    if ft is None:
        ft = forward_radial_ft(f, sg)

    lam = sg.nodes
    dens = plancherel_density(lam, params)
    phi = _phi_matrix(lam, rg.nodes, params)  # (n_lam, n_r)
    a = (lam**se.gamma_p * ft.values * dens)[:, None] * phi
    g_sq = math.pi * ((np.abs(a) ** 2 * (sg.weights / lam)[:, None]).sum(axis=0))
    g = RadialFunction(rg, np.sqrt(g_sq), params)
    value = lp_norm_polar(g, se.p)
    return float(value)


def _check_time_weight(tol: float) -> None:
    """Pin pi int |a|^2 dlam/lam against the direct time quadrature."""
    lam0, width = 16.0, 1.5
    nodes, wts = _composite_gl(lam0 - 6.0 * width, lam0 + 6.0 * width, 2048)
    u = (nodes - lam0) / (6.0 * width)
    # smooth compactly supported bump: gaussian times a flat-at-edges cutoff
    vals = np.exp(-((nodes - lam0) / width) ** 2) * np.exp(u**2 / (u**2 - 1.0000001))
    predicted = math.pi * float((np.abs(vals) ** 2 / nodes) @ wts)
    w_mu = 2.0 * lam0 * width
    t_max = 14.0 / w_mu
    mu_span = float(nodes[-1] ** 2 - nodes[0] ** 2)
    n_t = max(256, math.ceil(12.0 * 2.0 * t_max * mu_span / (2.0 * math.pi)))
    brute = time_l2_bruteforce(nodes, wts, vals, t_max, n_t)
    rel = abs(brute - predicted) / predicted
    if rel > tol:
        raise ConsistencyError(
            f"time-Plancherel weight check failed: plancherel {predicted:.8e}, "
            f"time quadrature {brute:.8e}, rel {rel:.2e}"
        )
