import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fasevt.correlation import (
    SystemConfig,
    build_jakes_matrix,
    dump_csv,
    eigen_decompose,
)
from fasevt.errors import ConfigurationError

J0_PI = -0.3042421776440938642  # series oracle
J0_TENTH_PI = 0.97547777407524950119  # series oracle


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SystemConfig(1, 0.5)
    with pytest.raises(ConfigurationError):
        SystemConfig(10, 0.0)
    with pytest.raises(ConfigurationError):
        SystemConfig(10, 1.0, avg_snr=-1.0)
    cfg = SystemConfig(11, 0.5, avg_snr=10.0, snr_threshold=10.0)
    assert cfg.port_spacing == pytest.approx(0.05)
    assert cfg.gamma_hat == 1.0


def test_diagonal_is_one():
    J = build_jakes_matrix(SystemConfig(17, 2.3)).entries
    assert np.all(np.diag(J) == 1.0)


def test_two_port_entry():
    J = build_jakes_matrix(SystemConfig(2, 0.5)).entries
    assert J[0, 1] == pytest.approx(J0_PI, abs=1e-14)


def test_dense_adjacent_entry():
    J = build_jakes_matrix(SystemConfig(11, 0.5)).entries
    assert J[0, 1] == pytest.approx(J0_TENTH_PI, abs=1e-14)
    assert J[0, 1] > 0.97


@given(st.integers(2, 60), st.floats(0.1, 10.0))
@settings(max_examples=50, deadline=None)
def test_matrix_invariants_and_roundtrip(n, w):
    J = build_jakes_matrix(SystemConfig(n, w)).entries
    assert np.array_equal(J, J.T)
    # Toeplitz
    for k in range(n):
        assert np.all(np.diagonal(J, k) == J[0, k])
    assert J.min() >= -0.403 and J.max() <= 1.0
    f = eigen_decompose(build_jakes_matrix(SystemConfig(n, w)))
    assert np.max(np.abs(f.reconstruct() - J)) <= 1e-9
    assert abs(f.raw_eigenvalues.sum() - n) <= 1e-8 * n
    U = f.eigenvectors
    assert np.max(np.abs(U.T @ U - np.eye(n))) <= 1e-10
    assert np.all(np.diff(f.eigenvalues) <= 0)
    assert np.all(f.eigenvalues >= 0)
    assert np.all(np.abs(f.raw_eigenvalues[f.raw_eigenvalues < 0]) < 1e-8)


def test_identity_decomposition():
    f = eigen_decompose(np.eye(5))
    assert np.allclose(f.eigenvalues, 1.0)
    assert f.clamp_count == 0


def test_two_port_eigenvalues():
    f = eigen_decompose(build_jakes_matrix(SystemConfig(2, 0.5)))
    assert f.eigenvalues == pytest.approx([1 - J0_PI, 1 + J0_PI], abs=1e-14)


def test_trace_ten_ports():
    f = eigen_decompose(build_jakes_matrix(SystemConfig(10, 0.5)))
    assert abs(f.eigenvalues.sum() - 10.0) <= 1e-7


def test_dense_matrix_clamps_only_noise():
    f = eigen_decompose(build_jakes_matrix(SystemConfig(200, 0.5)))
    assert np.all(f.eigenvalues >= 0)
    clamped = f.raw_eigenvalues[f.raw_eigenvalues < 0]
    assert clamped.size == f.clamp_count
    assert np.all(np.abs(clamped) < 1e-8)
    deficit = 200 - f.eigenvalues.sum()
    assert deficit <= np.abs(clamped).sum() + 1e-8 * 200


def test_correlation_weakens_with_aperture_until_first_root():
    # first root of J0 at 2.4048 -> adjacent spacing W/(N-1) < 0.3827
    n = 10
    ws = np.linspace(0.5, 0.38 * (n - 1), 30)
    adj = [build_jakes_matrix(SystemConfig(n, w)).entries[0, 1] for w in ws]
    assert np.all(np.diff(np.abs(adj)) < 0)


def test_dump_csv(tmp_path):
    J = build_jakes_matrix(SystemConfig(3, 1.0))
    f = eigen_decompose(J)
    path = tmp_path / "j.csv"
    dump_csv(path, J, f)
    rows = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    back = np.array([[float(v) for v in r.split(",")] for r in rows[:3]])
    assert np.array_equal(back, J.entries)
    assert [float(v) for v in rows[3].split(",")] == list(f.eigenvalues)
    assert math.isclose(sum(f.eigenvalues), 3.0)
