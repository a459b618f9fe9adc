"""Jake's-model spatial correlation for a linear FAS and its eigen-factor.

Ports are evenly spaced on a line of ``W`` wavelengths, so ports ``m`` and
``n`` sit ``|m - n| W / (N - 1)`` wavelengths apart and their channel
coefficients have correlation ``J0(2 pi W |m - n| / (N - 1))``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, NumericError
from .specfun import bessel_j0

DEFAULT_RAYLEIGH_SCALE = 1.0 / math.sqrt(2.0)

# eigenvalues in (-CLAMP_TOL, 0) are treated as rounding noise
CLAMP_TOL = 1e-8


@dataclass(frozen=True)
class SystemConfig:
    """FAS geometry and link budget.

    Parameters
    ----------
    n_ports : int
        Number of ports ``N`` (at least 2).
    aperture_w : float
        Antenna length ``W`` in carrier wavelengths.
    rayleigh_scale : float
        Scale ``sigma`` of each port's Rayleigh envelope.
    avg_snr : float
        Average transmit SNR, linear.
    snr_threshold : float
        Decoding SNR threshold, linear.
    """

    n_ports: int
    aperture_w: float
    rayleigh_scale: float = DEFAULT_RAYLEIGH_SCALE
    avg_snr: float = 10.0
    snr_threshold: float = 10.0

    def __post_init__(self):
        if int(self.n_ports) != self.n_ports or self.n_ports < 2:
            raise ConfigurationError(f"n_ports must be an integer >= 2, got {self.n_ports!r}")
        for name in ("aperture_w", "rayleigh_scale", "avg_snr", "snr_threshold"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"{name} must be finite and > 0, got {value!r}")

    @property
    def port_spacing(self):
        """Adjacent-port spacing ``rho = W / (N - 1)`` in wavelengths."""
        return self.aperture_w / (self.n_ports - 1)

    @property
    def gamma_hat(self):
        """Envelope outage threshold ``sqrt(gamma_th / avg_snr)``."""
        return math.sqrt(self.snr_threshold / self.avg_snr)


@dataclass(frozen=True)
class CorrelationMatrix:
    size: int
    entries: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class EigenFactor:
    """``J = U diag(eigenvalues) U^T`` with eigenvalues sorted descending.

    ``eigenvalues`` are already clamped at zero; ``raw_eigenvalues`` keeps
    the solver output for diagnostics.
    """

    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    clamp_count: int
    raw_eigenvalues: np.ndarray = field(repr=False)

    @property
    def size(self):
        return self.eigenvalues.shape[0]

    def sqrt_factor(self):
        """``U Lambda^{1/2}`` as an N x N real matrix."""
        return self.eigenvectors * np.sqrt(self.eigenvalues)[None, :]

    def reconstruct(self, clamped=False):
        lam = self.eigenvalues if clamped else self.raw_eigenvalues
        return (self.eigenvectors * lam[None, :]) @ self.eigenvectors.T


def jakes_entries(n_ports, aperture_w):
    """Toeplitz first row of the Jake's matrix: ``J0(2 pi W k / (N - 1))``."""
    k = np.arange(n_ports, dtype=float)
    return bessel_j0(2.0 * math.pi * aperture_w * k / (n_ports - 1))


def build_jakes_matrix(config):
    """Jake's correlation matrix for ``config``."""
    n = config.n_ports
    if n < 2:
        raise ConfigurationError("n_ports must be >= 2")
    row = np.atleast_1d(jakes_entries(n, config.aperture_w))
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    entries = row[idx]
    np.fill_diagonal(entries, 1.0)
    entries.setflags(write=False)
    return CorrelationMatrix(size=n, entries=entries)


def eigen_decompose(J):
    """Symmetric eigendecomposition with descending order and PSD clamping.

    Accepts a :class:`CorrelationMatrix` or a square array.
    """
    mat = J.entries if isinstance(J, CorrelationMatrix) else np.asarray(J, dtype=float)
    try:
        lam, vec = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        off = mat - np.diag(np.diag(mat))
        raise NumericError(
            f"eigensolver failed to converge (off-diagonal Frobenius norm {np.linalg.norm(off):.3e})"
        ) from exc
    order = np.argsort(lam)[::-1]
    raw = lam[order]
    vec = vec[:, order]
    if np.any(raw <= -CLAMP_TOL):
        raise NumericError(f"matrix is not positive semidefinite (min eigenvalue {raw.min():.3e})")
    negative = raw < 0.0
    clamped = np.where(negative, 0.0, raw)
    for arr in (raw, clamped, vec):
        arr.setflags(write=False)
    return EigenFactor(
        eigenvalues=clamped,
        eigenvectors=vec,
        clamp_count=int(negative.sum()),
        raw_eigenvalues=raw,
    )


def dump_csv(path, J, factor=None):
    """Write ``J`` (and optionally the eigenvalues) as ``%.17g`` CSV rows."""
    mat = J.entries if isinstance(J, CorrelationMatrix) else np.asarray(J)
    with open(path, "w") as fh:
        fh.write("# correlation matrix, row-major\n")
        for row in mat:
            fh.write(",".join("%.17g" % v for v in row) + "\n")
        if factor is not None:
            fh.write("# eigenvalues (clamped), descending\n")
            fh.write(",".join("%.17g" % v for v in factor.eigenvalues) + "\n")
