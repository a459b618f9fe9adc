"""Monte Carlo generation of the FAS channel maximum ``|h_FAS|``.

Each experiment draws ``h = U Lambda^{1/2} z`` with ``z ~ CN(0, I)`` and
records ``max_i |h_i|``. Experiments are generated in fixed-size chunks, each
chunk with its own PCG64 stream spawned from ``SeedSequence(seed)``; the
output therefore depends only on ``(config, n_samples, seed)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .correlation import DEFAULT_RAYLEIGH_SCALE, build_jakes_matrix, eigen_decompose
from .errors import DomainError

CHUNK_SIZE = 1 << 16

CSV_HEADER = "# n_ports,aperture_w,rayleigh_scale,seed,n_samples"

# Hazen plotting positions (i - 0.5) / M
HAZEN_OFFSET = 0.5


@dataclass(frozen=True)
class SampleSet:
    """Realizations of ``|h_FAS|`` plus the metadata that generated them.

    ``meta`` holds ``n_ports``, ``aperture_w``, ``rayleigh_scale`` and
    ``seed``; synthetic sets may leave entries as ``None``.
    """

    values: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=float).ravel()
        if vals.size < 1:
            raise DomainError("a SampleSet needs at least one value")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        srt = np.sort(vals)
        srt.setflags(write=False)
        object.__setattr__(self, "_sorted", srt)

    @property
    def n_samples(self):
        return self.values.size

    @property
    def sorted_values(self):
        return self._sorted

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write(format_csv(self))

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            return parse_csv(fh.read())


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def format_csv(s):
    m = s.meta
    meta_line = ",".join(
        _fmt(m.get(k)) for k in ("n_ports", "aperture_w", "rayleigh_scale", "seed")
    )
    lines = [CSV_HEADER, f"# {meta_line},{s.n_samples}"]
    lines.extend("%.17g" % v for v in s.values)
    return "\n".join(lines) + "\n"


def parse_csv(text):
    lines = text.splitlines()
    if len(lines) < 3 or lines[0].strip() != CSV_HEADER or not lines[1].startswith("#"):
        raise ValueError("not a SampleSet CSV (bad header)")
    fields = lines[1].lstrip("#").strip().split(",")
    if len(fields) != 5:
        raise ValueError("SampleSet metadata line must have 5 fields")
    casts = (int, float, float, int)
    meta = {}
    for key, cast, raw in zip(("n_ports", "aperture_w", "rayleigh_scale", "seed"), casts, fields):
        meta[key] = cast(raw) if raw.strip() else None
    n = int(fields[4])
    values = np.array([float(v) for v in lines[2:] if v.strip()])
    if values.size != n:
        raise ValueError(f"SampleSet declares {n} samples but contains {values.size}")
    if not np.all(np.isfinite(values)):
        raise ValueError("SampleSet contains non-finite values")
    return SampleSet(values, meta)


def sample_channels(factor, rng, size=None, scale=DEFAULT_RAYLEIGH_SCALE):
    """Draw correlated channel vectors ``h = U Lambda^{1/2} z``.

    Parameters
    ----------
    factor : EigenFactor
    rng : numpy.random.Generator
    size : int, optional
        Number of vectors; ``None`` returns a single length-N vector.
    scale : float
        Per-port Rayleigh scale; the default ``1/sqrt(2)`` gives unit power.

    Returns
    -------
    numpy.ndarray
        Complex array of shape ``(N,)`` or ``(size, N)``.
    """
    n = factor.size
    rows = 1 if size is None else int(size)
    # real U acts on real and imaginary parts independently
    amp = scale * np.sqrt(factor.eigenvalues)
    ut = factor.eigenvectors.T
    re = (rng.standard_normal((rows, n)) * amp) @ ut
    im = (rng.standard_normal((rows, n)) * amp) @ ut
    h = re + 1j * im
    return h[0] if size is None else h


def fas_gain(h):
    """Largest envelope ``max_i |h_i|`` (along the last axis for 2-D input)."""
    h = np.asarray(h)
    if h.size == 0 or h.shape[-1] == 0:
        raise DomainError("fas_gain needs at least one port")
    g = np.abs(h).max(axis=-1)
    return float(g) if g.ndim == 0 else g


def _chunk_rngs(seed, n_samples):
    n_chunks = -(-n_samples // CHUNK_SIZE)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    for i, child in enumerate(children):
        rows = min(CHUNK_SIZE, n_samples - i * CHUNK_SIZE)
        yield np.random.Generator(np.random.PCG64(child)), rows


def run_monte_carlo(config, n_samples, seed):
    """Simulate ``n_samples`` independent realizations of ``|h_FAS|``."""
    if int(n_samples) != n_samples or n_samples < 1:
        raise DomainError(f"n_samples must be a positive integer, got {n_samples!r}")
    if seed is None:
        raise DomainError("an explicit seed is required")
    n_samples = int(n_samples)
    factor = eigen_decompose(build_jakes_matrix(config))
    out = np.empty(n_samples)
    pos = 0
    for rng, rows in _chunk_rngs(seed, n_samples):
        h = sample_channels(factor, rng, rows, scale=config.rayleigh_scale)
        out[pos:pos + rows] = np.abs(h).max(axis=1)
        pos += rows
    meta = {
        "n_ports": config.n_ports,
        "aperture_w": float(config.aperture_w),
        "rayleigh_scale": float(config.rayleigh_scale),
        "seed": int(seed),
    }
    return SampleSet(out, meta)


def iid_rayleigh_maxima(n_ports, n_samples, seed, sigma=DEFAULT_RAYLEIGH_SCALE, exact=True):
    """Maxima of ``n_ports`` iid Rayleigh(sigma) envelopes.

    With ``exact=True`` each maximum is drawn by inverting its CDF
    ``(1 - exp(-x^2 / 2 sigma^2))^N``, which is equal in law to the brute-force
    maximum and costs O(1) per sample. ``exact=False`` draws all ports.
    """
    rng = np.random.default_rng(seed)
    if exact:
        u = rng.random(n_samples)
        # 1 - u**(1/N) without cancellation
        tail = -np.expm1(np.log(u) / n_ports)
        vals = sigma * np.sqrt(-2.0 * np.log(tail))
    else:
        vals = np.empty(n_samples)
        step = max(1, (1 << 22) // n_ports)
        for start in range(0, n_samples, step):
            rows = min(step, n_samples - start)
            env = rng.rayleigh(sigma, size=(rows, n_ports))
            vals[start:start + rows] = env.max(axis=1)
    meta = {"n_ports": n_ports, "aperture_w": None, "rayleigh_scale": sigma, "seed": seed}
    return SampleSet(vals, meta)


def empirical_cdf(s, x):
    """Fraction of samples ``<= x`` (scalar or array ``x``)."""
    counts = np.searchsorted(s.sorted_values, x, side="right")
    res = counts / s.n_samples
    return float(res) if np.ndim(res) == 0 else res


def empirical_quantiles(s, probs):
    """Hazen-position quantiles with linear interpolation between order statistics."""
    p = np.asarray(probs, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise DomainError("quantile probabilities must lie in (0, 1)")
    m = s.n_samples
    positions = (np.arange(1, m + 1) - HAZEN_OFFSET) / m
    q = np.interp(p, positions, s.sorted_values)
    return float(q) if q.ndim == 0 else q


def mc_outage(s, gamma_hat):
    """Simulated outage probability ``Pr(|h_FAS| <= gamma_hat)``."""
    if not gamma_hat > 0:
        raise DomainError("gamma_hat must be > 0")
    return empirical_cdf(s, gamma_hat)


def mc_capacity(s, avg_snr):
    """Simulated ergodic capacity ``mean(ln(1 + |h_FAS|^2 avg_snr))`` in nats."""
    if not avg_snr > 0:
        raise DomainError("avg_snr must be > 0")
    # np.sum uses pairwise summation: fixed order, bit-stable
    return float(np.sum(np.log1p(s.values * s.values * avg_snr)) / s.n_samples)


def rayleigh_cdf(x, sigma=DEFAULT_RAYLEIGH_SCALE):
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, -np.expm1(-x * x / (2.0 * sigma * sigma)), 0.0)


def iid_max_cdf(x, n_ports, sigma=DEFAULT_RAYLEIGH_SCALE):
    """CDF of the maximum of ``n_ports`` iid Rayleigh envelopes."""
    return rayleigh_cdf(x, sigma) ** n_ports

