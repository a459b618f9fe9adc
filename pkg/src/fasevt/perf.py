"""Closed-form outage probability / ergodic capacity and error diagnostics.

Outage is the fitted CDF of ``|h_FAS|`` at ``sqrt(gamma_th / avg_snr)``.
Ergodic capacity maps the envelope normalizers ``(a, b)`` to normalizers of
``C = ln(1 + avg_snr |h|^2)`` and takes the mean of the resulting EVD.
All SNRs are linear.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .chansim import empirical_quantiles
from .errors import DomainError
from .evd import (
    UNBOUNDED,
    XI_GUMBEL,
    GevParams,
    GumbelParams,
    gev_cdf,
    gev_quantile,
    gumbel_cdf,
    gumbel_quantile,
)
from .specfun import EULER_GAMMA, gamma

SOURCES = ("closed-form-gumbel", "closed-form-gev", "monte-carlo", "iid-baseline")


def gamma_hat(gamma_th, avg_snr):
    if not (gamma_th > 0 and avg_snr > 0):
        raise DomainError("SNR threshold and average SNR must be > 0")
    return math.sqrt(gamma_th / avg_snr)


def model_cdf(dist, x):
    if isinstance(dist, GumbelParams):
        return gumbel_cdf(dist, x)
    if isinstance(dist, GevParams):
        return gev_cdf(dist, x)
    raise TypeError(f"unsupported distribution {dist!r}")


def model_quantile(dist, q):
    if isinstance(dist, GumbelParams):
        return gumbel_quantile(dist, q)
    if isinstance(dist, GevParams):
        return gev_quantile(dist, q)
    raise TypeError(f"unsupported distribution {dist!r}")


# --------------------------------------------------------------------- outage


def op_gumbel(p, gamma_th, avg_snr):
    return gumbel_cdf(p, gamma_hat(gamma_th, avg_snr))


def op_gev(p, gamma_th, avg_snr):
    return gev_cdf(p, gamma_hat(gamma_th, avg_snr))


# ------------------------------------------------------------------- capacity


@dataclass(frozen=True)
class EcGumbelDerived:
    alpha: float
    beta: float
    e: float
    d: float


@dataclass(frozen=True)
class EcGevDerived:
    xi_tilde: float
    d_tilde: float
    e_tilde: float
    g1: float


def ec_gumbel_terms(p, avg_snr):
    """Normalizers of the capacity under a Gumbel envelope fit.

    ``alpha = 2ab`` and ``beta = b^2`` normalize ``|h|^2``; the capacity then
    has location ``d = ln(1 + beta g)`` and scale
    ``e = ln(1 + (alpha + beta) g) - d``.
    """
    if not avg_snr > 0:
        raise DomainError("avg_snr must be > 0")
    alpha = 2.0 * p.scale * p.location
    beta = p.location * p.location
    d = math.log1p(beta * avg_snr)
    e = math.log1p((alpha + beta) * avg_snr) - d
    return EcGumbelDerived(alpha=alpha, beta=beta, e=e, d=d)


def ec_gumbel(p, avg_snr):
    """Approximate ergodic capacity (nats) from Gumbel envelope parameters."""
    t = ec_gumbel_terms(p, avg_snr)
    return t.e * EULER_GAMMA + t.d


def ec_gev_terms(p, avg_snr):
    if not avg_snr > 0:
        raise DomainError("avg_snr must be > 0")
    xi_t = 2.0 * p.shape
    d = math.log1p(avg_snr * p.location * p.location)
    e = math.log1p(avg_snr * (p.location + p.scale) ** 2) - d
    g1 = gamma(1.0 - xi_t) if xi_t < 1.0 else math.inf
    return EcGevDerived(xi_tilde=xi_t, d_tilde=d, e_tilde=e, g1=g1)


def ec_gev(p, avg_snr):
    """Approximate ergodic capacity (nats) from GEV envelope parameters.

    The capacity is taken as GEV with location ``d~``, scale ``e~`` and shape
    ``2 xi``; returns :data:`UNBOUNDED` when that shape is ``>= 1``.
    """
    t = ec_gev_terms(p, avg_snr)
    if t.xi_tilde >= 1.0:
        return UNBOUNDED
    if abs(t.xi_tilde) < XI_GUMBEL:
        return t.d_tilde + t.e_tilde * EULER_GAMMA
    return t.d_tilde + t.e_tilde * (t.g1 - 1.0) / t.xi_tilde


# --------------------------------------------------------------- iid baseline


@dataclass(frozen=True)
class PerfPoint:
    avg_snr: float
    outage: float
    capacity: object  # float or UNBOUNDED
    source: str

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source tag {self.source!r}")
        if self.outage is not None and not 0.0 <= self.outage <= 1.0:
            raise ValueError(f"outage {self.outage!r} outside [0, 1]")


def iid_perf(baseline, gamma_th, avg_snr):
    g = baseline.as_gumbel()
    return PerfPoint(
        avg_snr=avg_snr,
        outage=op_gumbel(g, gamma_th, avg_snr),
        capacity=ec_gumbel(g, avg_snr),
        source="iid-baseline",
    )


def closed_form_perf(dist, gamma_th, avg_snr):
    if isinstance(dist, GumbelParams):
        return PerfPoint(avg_snr, op_gumbel(dist, gamma_th, avg_snr), ec_gumbel(dist, avg_snr),
                         "closed-form-gumbel")
    if isinstance(dist, GevParams):
        return PerfPoint(avg_snr, op_gev(dist, gamma_th, avg_snr), ec_gev(dist, avg_snr),
                         "closed-form-gev")
    raise TypeError(f"unsupported distribution {dist!r}")


# -------------------------------------------------------------- error metrics


class LogError(NamedTuple):
    value: float
    floored: bool


def log_error(p_sim, p_fit, floor):
    """``|log10 p_sim - log10 p_fit|`` with both probabilities floored at ``floor``."""
    if not floor > 0:
        raise DomainError("floor must be > 0")
    floored = p_sim < floor or p_fit < floor
    value = abs(math.log10(max(p_sim, floor)) - math.log10(max(p_fit, floor)))
    return LogError(value, floored)


def abs_error(c_sim, c_fit):
    """``|c_sim - c_fit|``; :data:`UNBOUNDED` if either side is unbounded."""
    if c_sim is UNBOUNDED or c_fit is UNBOUNDED:
        return UNBOUNDED
    return abs(c_sim - c_fit)


def qq_points(s, dist, n_points):
    """``(empirical, model)`` quantile pairs at Hazen levels ``(i - 0.5) / K``."""
    if n_points < 2:
        raise DomainError("a Q-Q plot needs at least 2 points")
    probs = (np.arange(1, n_points + 1) - 0.5) / n_points
    emp = np.atleast_1d(empirical_quantiles(s, probs))
    mod = np.atleast_1d(model_quantile(dist, probs))
    return np.column_stack([emp, mod])


def ks_distance(s, cdf):
    """Kolmogorov-Smirnov distance between the sample and a model CDF."""
    x = s.sorted_values
    m = x.size
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - f), np.max(f - (i - 1) / m)))
