"""Maximum-likelihood fitting of Gumbel and GEV distributions.

Gumbel: the location score has the explicit solution
``b(a) = -a log(mean(exp(-x/a)))``; substituting it leaves a single
equation in the scale,

    r(a) = a - mean(x) + sum(x w) / sum(w),   w = exp(-x / a),

which is strictly increasing (``r'(a) = 1 + Var_w(x) / a^2``) and is solved
by Newton's method safeguarded with bisection.

GEV: no closed-form profile exists, so the log-likelihood is maximized over
``(xi, log a, b)`` with a Nelder-Mead simplex.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ConvergenceError, DegenerateDataError
from .evd import GevParams, GumbelParams, gev_loglik, gumbel_loglik, params_from_dict
from .specfun import EULER_GAMMA, gamma

GUMBEL_MAX_ITER = 200
GEV_MAX_ITER = 2000
GEV_FATOL = 1e-9
GEV_XATOL = 1e-8
LMOM_SHAPE_CLAMP = 0.5
GUMBEL_START_XI = 0.05


@dataclass(frozen=True)
class FitReport:
    params: object
    loglik: float
    iterations: int
    converged: bool
    residual: float

    def to_dict(self):
        return {
            "params": self.params.to_dict(),
            "loglik": self.loglik,
            "iterations": self.iterations,
            "converged": self.converged,
            "residual": self.residual,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d):
        return cls(
            params=params_from_dict(d["params"]),
            loglik=float(d["loglik"]),
            iterations=int(d["iterations"]),
            converged=bool(d["converged"]),
            residual=float(d["residual"]),
        )


def _values(s):
    return s.values if hasattr(s, "values") else np.asarray(s, dtype=float)


def _weights(a, x):
    """Shifted weights ``exp(-(x - min x)/a)`` and the shift."""
    x0 = x.min()
    return np.exp(-(x - x0) / a), x0


def gumbel_profile_location(a, s):
    """Location maximizing the Gumbel likelihood at fixed scale ``a``."""
    x = _values(s)
    w, x0 = _weights(a, x)
    # log-mean-exp with the max of -x/a factored out
    return float(x0 - a * math.log(np.sum(w) / x.size))


def gumbel_profile_residual(a, s):
    """Profiled scale score ``r(a)``; zero at the ML scale."""
    x = _values(s)
    w, x0 = _weights(a, x)
    d = x - x0
    return float(a - np.mean(d) + np.sum(d * w) / np.sum(w))


def _residual_and_slope(a, d):
    w = np.exp(-d / a)
    sw = np.sum(w)
    m1 = np.sum(d * w) / sw
    m2 = np.sum(d * d * w) / sw
    r = a - np.mean(d) + m1
    return r, 1.0 + max(m2 - m1 * m1, 0.0) / (a * a)


def gumbel_scores(p, s):
    """The two likelihood scores ``(dL/db, dL/da)`` at ``p``."""
    x = _values(s)
    a, b = p.scale, p.location
    z = (x - b) / a
    e = np.exp(-z)
    d_b = np.sum(1.0 - e) / a
    d_a = -x.size / a + np.sum(z) / a - np.sum(z * e) / a
    return float(d_b), float(d_a)


def fit_gumbel_mle(s):
    """Gumbel ML fit by safeguarded Newton iteration on ``r(a)``."""
    x = _values(s)
    if x.size < 10:
        raise DegenerateDataError("Gumbel fit needs at least 10 samples")
    sd = float(np.std(x))
    if not sd > 0:
        raise DegenerateDataError("Gumbel fit needs samples with nonzero variance")
    d = x - x.min()
    tol = 1e-10 * (1.0 + abs(float(np.mean(x))))

    a0 = sd * math.sqrt(6.0) / math.pi
    lo, hi = a0 / 10.0, a0 * 10.0
    a_floor, a_ceil = 1e-6 * sd, 1e3 * sd
    r_lo, _ = _residual_and_slope(lo, d)
    while r_lo > 0:
        lo /= 2.0
        if lo < a_floor:
            raise ConvergenceError("no sign change of the scale score below the start")
        r_lo, _ = _residual_and_slope(lo, d)
    r_hi, _ = _residual_and_slope(hi, d)
    while r_hi < 0:
        hi *= 2.0
        if hi > a_ceil:
            raise ConvergenceError("no sign change of the scale score above the start")
        r_hi, _ = _residual_and_slope(hi, d)

    a = min(max(a0, lo), hi)
    r, slope = _residual_and_slope(a, d)
    it = 0
    while abs(r) >= tol and it < GUMBEL_MAX_ITER:
        it += 1
        if r < 0:
            lo = a
        else:
            hi = a
        step = a - r / slope
        a = step if lo < step < hi else 0.5 * (lo + hi)
        r, slope = _residual_and_slope(a, d)
        if hi - lo <= 4e-16 * a:
            break
    converged = bool(abs(r) < tol)
    b = gumbel_profile_location(a, x)
    params = GumbelParams(location=b, scale=float(a))
    report = FitReport(params, gumbel_loglik(params, x), it, converged, float(abs(r)))
    if not converged:
        raise ConvergenceError(f"Gumbel scale equation unresolved (|r|={abs(r):.3e})", report)
    return report


# ---------------------------------------------------------------- L-moments


def sample_l_moments(s):
    """First three sample L-moments ``(l1, l2, l3)`` from unbiased PWMs."""
    x = np.sort(_values(s))
    n = x.size
    if n < 3:
        raise DegenerateDataError("L-moments need at least 3 samples")
    j = np.arange(n, dtype=float)
    b0 = x.mean()
    b1 = np.sum(j * x) / (n * (n - 1))
    b2 = np.sum(j * (j - 1) * x) / (n * (n - 1) * (n - 2))
    return float(b0), float(2 * b1 - b0), float(6 * b2 - 6 * b1 + b0)


def l_moments_init(s):
    """GEV starting values from sample L-moments (Hosking's approximation)."""
    x = _values(s)
    if x.size < 10:
        raise DegenerateDataError("L-moment initialization needs at least 10 samples")
    l1, l2, l3 = sample_l_moments(x)
    if not l2 > 0:
        raise DegenerateDataError("second L-moment is not positive")
    tau3 = l3 / l2
    c = 2.0 / (3.0 + tau3) - math.log(2.0) / math.log(3.0)
    k = 7.8590 * c + 2.9554 * c * c  # Hosking's k = -xi
    k = min(max(k, -LMOM_SHAPE_CLAMP), LMOM_SHAPE_CLAMP)
    if abs(k) < 1e-8:
        a = l2 / math.log(2.0)
        b = l1 - EULER_GAMMA * a
    else:
        g = gamma(1.0 + k)
        a = l2 * k / ((1.0 - 2.0 ** (-k)) * g)
        b = l1 - a * (1.0 - g) / k
    return GevParams(shape=-k, location=b, scale=a)


# ---------------------------------------------------------------------- GEV


def _gev_objective(x):
    n = x.size

    def neg_mean_loglik(theta):
        xi, log_a, b = theta
        ll = gev_loglik(GevParams(shape=xi, location=b, scale=math.exp(log_a)), x)
        return math.inf if not math.isfinite(ll) else -ll / n

    return neg_mean_loglik


def _feasible_start(p, x):
    """Shrink the shape toward 0 until every sample is inside the support."""
    xi = p.shape
    for _ in range(60):
        cand = GevParams(shape=xi, location=p.location, scale=p.scale)
        if math.isfinite(gev_loglik(cand, x)):
            return cand
        xi *= 0.5
    return GevParams(shape=0.0, location=p.location, scale=p.scale)


def _simplex(theta0):
    xi, log_a, b = theta0
    steps = np.array([0.02, 0.05, 0.05 * math.exp(log_a)])
    pts = [np.asarray(theta0, dtype=float)]
    for i in range(3):
        v = pts[0].copy()
        v[i] += steps[i]
        pts.append(v)
    return np.array(pts)


def fit_gev_mle(s, gumbel_fit=None):
    """GEV ML fit by Nelder-Mead over ``(xi, log a, b)``.

    Three starts are run: the L-moment estimate, and the Gumbel ML fit with
    the shape nudged to ``-0.05`` and ``+0.05``. The best optimum is kept.
    """
    x = _values(s)
    if x.size < 50:
        raise DegenerateDataError("GEV fit needs at least 50 samples")
    if not np.std(x) > 0:
        raise DegenerateDataError("GEV fit needs samples with nonzero variance")
    objective = _gev_objective(x)

    lm = _feasible_start(l_moments_init(x), x)
    if gumbel_fit is None:
        gumbel_fit = fit_gumbel_mle(x)
    g = gumbel_fit.params
    starts = [lm] + [
        _feasible_start(GevParams(shape=nudge, location=g.location, scale=g.scale), x)
        for nudge in (-GUMBEL_START_XI, GUMBEL_START_XI)
    ]

    best = None
    starts_loglik = []
    total_iter = 0
    for start in starts:
        theta0 = (start.shape, math.log(start.scale), start.location)
        starts_loglik.append(gev_loglik(start, x))
        res = minimize(
            objective,
            theta0,
            method="Nelder-Mead",
            options={
                "initial_simplex": _simplex(theta0),
                "xatol": GEV_XATOL,
                "fatol": GEV_FATOL,
                "maxiter": GEV_MAX_ITER,
                "maxfev": 2 * GEV_MAX_ITER,
            },
        )
        total_iter += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res

    xi, log_a, b = best.x
    params = GevParams(shape=float(xi), location=float(b), scale=math.exp(log_a))
    ll = gev_loglik(params, x)
    spread = float(np.max(np.abs(best.final_simplex[1] - best.final_simplex[1][0])))
    report = FitReport(params, ll, total_iter, bool(best.success), spread)
    if not best.success:
        raise ConvergenceError(f"GEV simplex did not converge: {best.message}", report)
    assert ll >= max(starts_loglik) - 1e-9 * abs(ll)
    return report
