"""Scalar special functions used by the correlation model and the GEV mean.

Both are thin guards around mature implementations: ``scipy.special.j0``
(Cephes; absolute error ~1e-16 on the real line) and ``math.lgamma``.
"""

import math

import numpy as np
from scipy import special

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061


def bessel_j0(x):
    """Zero-order Bessel function of the first kind.

    Accepts a scalar or an array. Raises :class:`DomainError` on non-finite
    input. The function is even, so ``|x|`` is used.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_j0 requires finite arguments")
    out = special.j0(np.abs(arr))
    if out.ndim == 0:
        return float(out)
    return out


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError(f"ln_gamma is only defined here for finite x > 0, got {x!r}")
    return math.lgamma(x)


def gamma(x):
    """Gamma function for ``x > 0`` via :func:`ln_gamma`."""
    return math.exp(ln_gamma(x))
