"""Numerical Fourier analysis on real hyperbolic space.

The package implements, on the hyperboloid model of H^d, the spherical
function and Harish-Chandra c-function (:mod:`.specfun`), the radial
Helgason transform with its inversion and Plancherel identities
(:mod:`.transform`), boundary extension/restriction operators, spectral
projectors, resolvent symbols and a local-smoothing functional
(:mod:`.operators`), L^p norms in polar and horocyclic coordinates with
log-log slope fitting (:mod:`.norms`), and a verification layer that
measures sharp scaling exponents against their predictions
(:mod:`.verify`, driven by :mod:`.cli`).
"""

from .errors import AccuracyError, ConsistencyError, DomainError, TruncationError
from .geometry import LorentzBoost, ModelParams
from .norms import (
    IwasawaBox,
    PolarSamples,
    ScalingFit,
    fit_scaling_exponent,
    lp_norm_iwasawa,
    lp_norm_polar,
    sphere_lp_norm,
)
from .operators import (
    ResolventParams,
    SmoothingExponent,
    SphereFunction,
    SphereGrid,
    dresolvent_symbol,
    extension_operator,
    knapp_cap,
    resolvent_symbol,
    restriction_operator_d2,
    smoothing_functional,
    spectral_projector_radial,
    sphere_grid,
)
from .specfun import harish_chandra_c, plancherel_density, spherical_batch
from .transform import (
    DyadicPiece,
    MultiplierSymbol,
    RadialFunction,
    SpectralFunction,
    forward_radial_ft,
    inverse_radial_ft,
    multiplier_kernel,
    radial_grid,
    spectral_grid,
)
from .verify import (
    ExponentPrediction,
    RegionPoint,
    classify_region,
    predicted_alpha,
    predicted_offduality_projector,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ConsistencyError",
    "DomainError",
    "TruncationError",
    "LorentzBoost",
    "ModelParams",
    "IwasawaBox",
    "PolarSamples",
    "ScalingFit",
    "fit_scaling_exponent",
    "lp_norm_iwasawa",
    "lp_norm_polar",
    "sphere_lp_norm",
    "ResolventParams",
    "SmoothingExponent",
    "SphereFunction",
    "SphereGrid",
    "dresolvent_symbol",
    "extension_operator",
    "knapp_cap",
    "resolvent_symbol",
    "restriction_operator_d2",
    "smoothing_functional",
    "spectral_projector_radial",
    "sphere_grid",
    "harish_chandra_c",
    "plancherel_density",
    "spherical_batch",
    "DyadicPiece",
    "MultiplierSymbol",
    "RadialFunction",
    "SpectralFunction",
    "forward_radial_ft",
    "inverse_radial_ft",
    "multiplier_kernel",
    "radial_grid",
    "spectral_grid",
    "ExponentPrediction",
    "RegionPoint",
    "classify_region",
    "predicted_alpha",
    "predicted_offduality_projector",
    "__version__",
]
