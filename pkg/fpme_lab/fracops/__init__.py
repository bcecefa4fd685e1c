from fpme_lab.fracops.diagnostics import (
    ExtraTermBounds,
    L1Report,
    convdisc_gap,
    discrete_gradient,
    extra_term_bounds,
    fit_slope,
    l1_boundedness,
)
from fpme_lab.fracops.functions import FAMILIES, FracParams, TestFunction, chebyshev_times
from fpme_lab.fracops.operators import Kn_apply, Kn_profile, frac_laplacian, ring_positions
from fpme_lab.fracops.sobolev import sobolev_seminorm, sobolev_seminorm_spectral
from fpme_lab.fracops.spectral import periodic_frac_laplacian, symbol, wavenumbers

__all__ = [
    "FAMILIES",
    "TestFunction",
    "FracParams",
    "chebyshev_times",
    "frac_laplacian",
    "Kn_apply",
    "Kn_profile",
    "ring_positions",
    "periodic_frac_laplacian",
    "symbol",
    "wavenumbers",
    "convdisc_gap",
    "extra_term_bounds",
    "ExtraTermBounds",
    "l1_boundedness",
    "L1Report",
    "discrete_gradient",
    "fit_slope",
    "sobolev_seminorm",
    "sobolev_seminorm_spectral",
]
