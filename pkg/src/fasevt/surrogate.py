"""Cubic surrogate polynomials mapping (N, W) to fitted EVD parameters.

Each parameter is a 9-term polynomial over the monomials
``1, W, N, W^2, WN, N^2, W^2 N, W N^2, N^3``. The coefficients were
regressed on ML fits over ``W in [0.5, 5]`` and port spacing
``rho = W / (N - 1) in [0.05, 0.5]``; outside that box evaluation is refused
unless explicitly forced.
"""

import json
import warnings
from dataclasses import dataclass
from importlib import resources

from .errors import DomainError, SurrogateRangeError
from .evd import GevParams, GumbelParams

MONOMIALS = ("1", "W", "N", "W^2", "WN", "N^2", "W^2N", "WN^2", "N^3")

COEFFICIENTS = {
    "gumbel_scale": (
        0.3928, -0.03528, 0.0009585, 0.002817, 0.0003703,
        -2.94e-5, -4.659e-5, 8.07e-7, 1.289e-7,
    ),
    "gumbel_location": (
        0.9261, 0.2629, 0.007106, -0.0335, -0.000859,
        -9.37e-5, 0.0004863, -2.84e-5, 1.192e-6,
    ),
    "gev_shape": (
        -0.1235, 0.001014, -8.942e-6, 0.0007796, -8.619e-5,
        1.867e-6, 1.867e-6, 2.332e-6, -6.288e-8,
    ),
    "gev_scale": (
        0.4039, -0.03814, 0.0008851, 0.003338, 0.0003779,
        -2.798e-5, -5.65e-5, 1.552e-6, 1.004e-7,
    ),
    "gev_location": (
        0.9346, 0.2511, 0.009196, -0.03177, -0.0006431,
        -0.000144, 0.0004325, -2.548e-5, 1.404e-6,
    ),
}


@dataclass(frozen=True)
class ValidityRange:
    w_min: float = 0.5
    w_max: float = 5.0
    rho_min: float = 0.05
    rho_max: float = 0.5


VALIDITY = ValidityRange()

# boundary points such as rho = 0.5/10 must count as inside
_EPS = 1e-12


def evaluate(coeffs, n_ports, aperture_w):
    """Grouped (Horner-in-N) evaluation of a 9-term surrogate polynomial."""
    c0, cw, cn, cww, cwn, cnn, cwwn, cwnn, cnnn = coeffs
    w, n = float(aperture_w), float(n_ports)
    in_w = c0 + w * (cw + w * cww)
    lin_n = cn + w * (cwn + w * cwwn)
    quad_n = cnn + w * cwnn
    return in_w + n * (lin_n + n * (quad_n + n * cnnn))


def evaluate_naive(coeffs, n_ports, aperture_w):
    w, n = float(aperture_w), float(n_ports)
    basis = (1.0, w, n, w * w, w * n, n * n, w * w * n, w * n * n, n ** 3)
    return sum(c * m for c, m in zip(coeffs, basis))


def validity_check(n_ports, aperture_w, limits=VALIDITY):
    """``None`` when (N, W) is inside the surrogate box, else a description."""
    if n_ports < 2:
        raise DomainError("n_ports must be >= 2")
    rho = aperture_w / (n_ports - 1)
    problems = []
    if aperture_w < limits.w_min - _EPS:
        problems.append(f"W={aperture_w:g} < w_min={limits.w_min:g}")
    if aperture_w > limits.w_max + _EPS:
        problems.append(f"W={aperture_w:g} > w_max={limits.w_max:g}")
    if rho < limits.rho_min - _EPS:
        problems.append(f"rho=W/(N-1)={rho:g} < rho_min={limits.rho_min:g}")
    if rho > limits.rho_max + _EPS:
        problems.append(f"rho=W/(N-1)={rho:g} > rho_max={limits.rho_max:g}")
    return "; ".join(problems) or None


def _guard(n_ports, aperture_w, force):
    problem = validity_check(n_ports, aperture_w)
    if problem is None:
        return
    if not force:
        raise SurrogateRangeError(f"(N={n_ports}, W={aperture_w:g}) outside surrogate range: {problem}")
    warnings.warn(f"extrapolating surrogate outside its range: {problem}", stacklevel=3)


def gumbel_params_surrogate(n_ports, aperture_w, force=False):
    _guard(n_ports, aperture_w, force)
    a = evaluate(COEFFICIENTS["gumbel_scale"], n_ports, aperture_w)
    b = evaluate(COEFFICIENTS["gumbel_location"], n_ports, aperture_w)
    return GumbelParams(location=b, scale=a)


def gev_params_surrogate(n_ports, aperture_w, force=False):
    _guard(n_ports, aperture_w, force)
    return GevParams(
        shape=evaluate(COEFFICIENTS["gev_shape"], n_ports, aperture_w),
        location=evaluate(COEFFICIENTS["gev_location"], n_ports, aperture_w),
        scale=evaluate(COEFFICIENTS["gev_scale"], n_ports, aperture_w),
    )


def params_surrogate(dist, n_ports, aperture_w, force=False):
    if dist == "gumbel":
        return gumbel_params_surrogate(n_ports, aperture_w, force)
    if dist == "gev":
        return gev_params_surrogate(n_ports, aperture_w, force)
    raise ValueError(f"unknown distribution {dist!r}")


def coefficients_table():
    """The coefficient table as a JSON-ready dict."""
    return {
        "monomials": list(MONOMIALS),
        "validity": {
            "w_min": VALIDITY.w_min,
            "w_max": VALIDITY.w_max,
            "rho_min": VALIDITY.rho_min,
            "rho_max": VALIDITY.rho_max,
        },
        "coefficients": {k: list(v) for k, v in COEFFICIENTS.items()},
    }


def export_coefficients(path):
    with open(path, "w") as fh:
        json.dump(coefficients_table(), fh, indent=2)
        fh.write("\n")


def packaged_coefficients():
    """The shipped ``surrogate_coefficients.json``."""
    text = resources.files("fasevt").joinpath("data/surrogate_coefficients.json").read_text()
    return json.loads(text)
