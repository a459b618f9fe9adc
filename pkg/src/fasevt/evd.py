"""Gumbel and GEV distributions for block maxima.

Shape convention: ``xi > 0`` is Frechet-type (heavy upper tail), ``xi = 0``
Gumbel, ``xi < 0`` Weibull-type with finite upper endpoint
``location - scale / xi``. All ``x`` arguments may be scalars or arrays.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import EULER_GAMMA, gamma

# |xi| below this is treated as exactly Gumbel
XI_GUMBEL = 1e-12
# |xi| below this uses the series for log(1 + xi*y)/xi
XI_SERIES = 1e-6


class _Unbounded:
    """Singleton marking an infinite mean / capacity.

    Kept distinct from ``float('inf')`` so that callers must branch on it
    instead of letting an infinity leak into error metrics.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"

    def __str__(self):
        return "inf"

    def __bool__(self):
        return True


UNBOUNDED = _Unbounded()


def is_unbounded(value):
    return value is UNBOUNDED


@dataclass(frozen=True)
class GumbelParams:
    location: float
    scale: float

    def __post_init__(self):
        if not (math.isfinite(self.location) and math.isfinite(self.scale)):
            raise DomainError("Gumbel parameters must be finite")
        if not self.scale > 0:
            raise DomainError(f"Gumbel scale must be > 0, got {self.scale!r}")

    family = "gumbel"

    def to_dict(self):
        return {"family": "gumbel", "location": self.location, "scale": self.scale}


@dataclass(frozen=True)
class GevParams:
    shape: float
    location: float
    scale: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.shape, self.location, self.scale)):
            raise DomainError("GEV parameters must be finite")
        if not self.scale > 0:
            raise DomainError(f"GEV scale must be > 0, got {self.scale!r}")

    family = "gev"

    @property
    def upper_endpoint(self):
        return self.location - self.scale / self.shape if self.shape < 0 else math.inf

    @property
    def lower_endpoint(self):
        return self.location - self.scale / self.shape if self.shape > 0 else -math.inf

    def to_dict(self):
        return {
            "family": "gev",
            "location": self.location,
            "scale": self.scale,
            "shape": self.shape,
        }


def params_to_json(p):
    # repr round-trips doubles exactly
    return json.dumps(p.to_dict(), indent=2)


def params_from_dict(d):
    family = d.get("family")
    if family == "gumbel":
        return GumbelParams(location=float(d["location"]), scale=float(d["scale"]))
    if family == "gev":
        return GevParams(
            shape=float(d["shape"]), location=float(d["location"]), scale=float(d["scale"])
        )
    raise ValueError(f"unknown distribution family {family!r}")


def params_from_json(text):
    return params_from_dict(json.loads(text))


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


# --------------------------------------------------------------------- Gumbel


def gumbel_cdf(p, x):
    u = (np.asarray(x, dtype=float) - p.location) / p.scale
    with np.errstate(over="ignore"):
        return _out(np.exp(-np.exp(-u)))


def gumbel_pdf(p, x):
    u = (np.asarray(x, dtype=float) - p.location) / p.scale
    with np.errstate(over="ignore"):
        return _out(np.exp(-u - np.exp(-u)) / p.scale)


def gumbel_logpdf(p, x):
    u = (np.asarray(x, dtype=float) - p.location) / p.scale
    with np.errstate(over="ignore"):
        return _out(-math.log(p.scale) - u - np.exp(-u))


def gumbel_quantile(p, q):
    q = np.asarray(q, dtype=float)
    if np.any(~((q > 0) & (q < 1))):
        raise DomainError("quantile level must lie in (0, 1)")
    return _out(p.location - p.scale * np.log(-np.log(q)))


def gumbel_mean(p):
    return p.location + p.scale * EULER_GAMMA


def gumbel_loglik(p, s):
    """Sum of Gumbel log-densities over the samples of ``s``."""
    x = _sample_values(s)
    u = (x - p.location) / p.scale
    with np.errstate(over="ignore"):
        return float(-x.size * math.log(p.scale) - np.sum(u) - np.sum(np.exp(-u)))


def _sample_values(s):
    x = s.values if hasattr(s, "values") else np.asarray(s, dtype=float)
    if x.size == 0:
        raise DomainError("log-likelihood of an empty sample")
    return x


# ------------------------------------------------------------------------ GEV


def _log1p_over_xi(xi, y):
    """``log(1 + xi*y) / xi`` with the Gumbel limit ``y`` at ``xi = 0``."""
    if abs(xi) < XI_GUMBEL:
        return y
    if abs(xi) < XI_SERIES:
        z = xi * y
        return y * (1.0 - z / 2.0 + z * z / 3.0)
    return np.log1p(xi * y) / xi


def _standardize(p, x):
    y = (np.asarray(x, dtype=float) - p.location) / p.scale
    t = 1.0 + p.shape * y
    return y, t


def gev_cdf(p, x):
    y, t = _standardize(p, x)
    if abs(p.shape) < XI_GUMBEL:
        with np.errstate(over="ignore"):
            return _out(np.exp(-np.exp(-y)))
    inside = t > 0
    ys = np.where(inside, y, 0.0)
    with np.errstate(over="ignore"):
        val = np.exp(-np.exp(-_log1p_over_xi(p.shape, ys)))
    outside = 0.0 if p.shape > 0 else 1.0
    return _out(np.where(inside, val, outside))


def gev_logpdf(p, x):
    """Log-density; ``-inf`` outside the support."""
    y, t = _standardize(p, x)
    if abs(p.shape) < XI_GUMBEL:
        with np.errstate(over="ignore"):
            return _out(-math.log(p.scale) - y - np.exp(-y))
    inside = t > 0
    ys = np.where(inside, y, 0.0)
    l = _log1p_over_xi(p.shape, ys)  # = log(t) / xi
    with np.errstate(over="ignore"):
        val = -math.log(p.scale) - (1.0 + p.shape) * l - np.exp(-l)
    return _out(np.where(inside, val, -np.inf))


def gev_pdf(p, x):
    with np.errstate(under="ignore"):
        return _out(np.exp(gev_logpdf(p, x)))


def gev_quantile(p, q):
    q = np.asarray(q, dtype=float)
    if np.any(~((q > 0) & (q < 1))):
        raise DomainError("quantile level must lie in (0, 1)")
    w = -np.log(-np.log(q))  # Gumbel-standardized level
    xi = p.shape
    if abs(xi) < XI_GUMBEL:
        return _out(p.location + p.scale * w)
    # ((-ln q)^(-xi) - 1) / xi = expm1(xi * w) / xi
    return _out(p.location + p.scale * np.expm1(xi * w) / xi)


def gev_mean(p):
    """Mean of the GEV, or :data:`UNBOUNDED` when ``xi >= 1``."""
    xi = p.shape
    if xi >= 1.0:
        return UNBOUNDED
    if abs(xi) < XI_GUMBEL:
        return p.location + p.scale * EULER_GAMMA
    return p.location + p.scale * (gamma(1.0 - xi) - 1.0) / xi


def gev_loglik(p, s):
    """Sum of GEV log-densities; ``-inf`` if any sample is outside the support."""
    x = _sample_values(s)
    y, t = _standardize(p, x)
    if abs(p.shape) < XI_GUMBEL:
        with np.errstate(over="ignore"):
            return float(-x.size * math.log(p.scale) - np.sum(y) - np.sum(np.exp(-y)))
    if np.any(t <= 0):
        return -math.inf
    l = _log1p_over_xi(p.shape, y)
    with np.errstate(over="ignore"):
        return float(
            -x.size * math.log(p.scale) - (1.0 + p.shape) * np.sum(l) - np.sum(np.exp(-l))
        )


# ------------------------------------------------------- iid Rayleigh baseline


@dataclass(frozen=True)
class IidBaseline:
    """Gumbel normalizers of the maximum of N iid Rayleigh(sigma) envelopes."""

    a_hat: float
    b_hat: float
    n_ports: int

    def as_gumbel(self):
        return GumbelParams(location=self.b_hat, scale=self.a_hat)


def iid_rayleigh_normalizers(n_ports, sigma):
    """``a = sigma / sqrt(2 ln N)``, ``b = sigma sqrt(2 ln N)``."""
    if n_ports < 2:
        raise DomainError("iid normalizers need n_ports >= 2")
    if not sigma > 0:
        raise DomainError("sigma must be > 0")
    root = math.sqrt(2.0 * math.log(n_ports))
    return IidBaseline(a_hat=sigma / root, b_hat=sigma * root, n_ports=n_ports)


# ---------------------------------------------------- domain-of-attraction aid


def von_mises_check(cdf, pdf, x, h=None, sf=None):
    """Central-difference estimate of ``d/dx [(1 - F(x)) / f(x)]``.

    A limit of 0 as ``x`` approaches the right endpoint places ``F`` in the
    Gumbel domain of attraction. Pass ``sf`` (survival function) when
    ``1 - cdf(x)`` would round to zero in the far tail.
    """
    if h is None:
        h = max(1e-4, 1e-4 * abs(x))
    survival = sf if sf is not None else (lambda v: 1.0 - cdf(v))
    f_lo, f_hi = pdf(x - h), pdf(x + h)
    if not (f_lo > 0 and f_hi > 0):
        raise DomainError(f"zero density in the stencil around x={x!r}")
    return (survival(x + h) / f_hi - survival(x - h) / f_lo) / (2.0 * h)
