"""Extreme-value performance evaluation of single-antenna fluid antenna systems.

The FAS channel (the largest envelope over N spatially correlated Rayleigh
ports) is modelled with Gumbel or GEV distributions; outage probability and
ergodic capacity then follow in closed form.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    ConvergenceError,
    DegenerateDataError,
    DomainError,
    FasEvtError,
    NumericError,
    SurrogateRangeError,
)
from .correlation import SystemConfig, build_jakes_matrix, eigen_decompose
from .chansim import SampleSet, run_monte_carlo
from .evd import GevParams, GumbelParams, UNBOUNDED
from .fit import fit_gev_mle, fit_gumbel_mle
from .surrogate import gev_params_surrogate, gumbel_params_surrogate

__all__ = [
    "ConfigurationError",
    "ConvergenceError",
    "DegenerateDataError",
    "DomainError",
    "FasEvtError",
    "NumericError",
    "SurrogateRangeError",
    "SystemConfig",
    "build_jakes_matrix",
    "eigen_decompose",
    "SampleSet",
    "run_monte_carlo",
    "GevParams",
    "GumbelParams",
    "UNBOUNDED",
    "fit_gev_mle",
    "fit_gumbel_mle",
    "gev_params_surrogate",
    "gumbel_params_surrogate",
]
