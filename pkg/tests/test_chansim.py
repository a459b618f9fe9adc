import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fasevt.chansim import (
    SampleSet,
    empirical_cdf,
    empirical_quantiles,
    fas_gain,
    format_csv,
    iid_max_cdf,
    iid_rayleigh_maxima,
    mc_capacity,
    mc_outage,
    parse_csv,
    rayleigh_cdf,
    run_monte_carlo,
    sample_channels,
)
from fasevt.correlation import SystemConfig, build_jakes_matrix, eigen_decompose
from fasevt.errors import DomainError
from fasevt.perf import ks_distance

from conftest import fas_samples

# quad oracle: E[max of two iid Rayleigh(1/sqrt2)] = int (1 - (1-exp(-x^2))^2) dx
MEAN_MAX_TWO_RAYLEIGH = 1.1457967822477659017
# exp(0.1) * E1(0.1) = int ln(1 + 10 x) exp(-x) dx
EXP_GAIN_CAPACITY_10 = 2.0146425447084516791
GUMBEL_MEDIAN = 0.36651292058166432701


def sample_covariance(factor, n_draws, seed, chunk=200_000):
    rng = np.random.default_rng(seed)
    n = factor.size
    acc = np.zeros((n, n))
    done = 0
    while done < n_draws:
        rows = min(chunk, n_draws - done)
        h = sample_channels(factor, rng, rows)
        acc += h.real.T @ h.real + h.imag.T @ h.imag
        done += rows
    return acc / n_draws


def test_fas_gain_examples():
    assert fas_gain(np.array([3 + 4j])) == 5.0
    assert fas_gain(np.array([1 + 0j, 2j, -1 - 1j])) == 2.0
    with pytest.raises(DomainError):
        fas_gain(np.array([], dtype=complex))


def test_identity_factor_gives_iid_rayleigh(rng):
    f = eigen_decompose(np.eye(4))
    h = sample_channels(f, rng, 200_000)
    assert h.shape == (200_000, 4)
    s = SampleSet(np.abs(h[:, 2]))
    assert ks_distance(s, rayleigh_cdf) < 0.005
    # off-diagonal covariance vanishes
    c = (h.real.T @ h.real + h.imag.T @ h.imag) / h.shape[0]
    assert np.max(np.abs(c - np.eye(4))) < 0.01


def test_single_draw_shape(rng):
    f = eigen_decompose(build_jakes_matrix(SystemConfig(5, 1.0)))
    assert sample_channels(f, rng).shape == (5,)


@pytest.mark.slow
def test_covariance_matches_jakes():
    J = build_jakes_matrix(SystemConfig(10, 0.5))
    cov = sample_covariance(eigen_decompose(J), 1_000_000, 99)
    assert np.max(np.abs(cov - J.entries)) <= 0.01


def test_unit_power_per_port():
    f = eigen_decompose(build_jakes_matrix(SystemConfig(8, 1.3)))
    rng = np.random.default_rng(5)
    h = sample_channels(f, rng, 1_000_000)
    p = np.abs(h) ** 2
    se = p.std(axis=0) / math.sqrt(p.shape[0])
    assert np.all(np.abs(p.mean(axis=0) - 1.0) <= 3 * se + 1e-12)


def test_single_port_is_rayleigh():
    f = eigen_decompose(np.eye(1))
    h = sample_channels(f, np.random.default_rng(3), 100_000)
    s = SampleSet(fas_gain(h))
    assert ks_distance(s, rayleigh_cdf) < 0.01


def test_monte_carlo_determinism_and_meta():
    cfg = SystemConfig(6, 0.9)
    a = run_monte_carlo(cfg, 70_000, seed=11)
    b = run_monte_carlo(cfg, 70_000, seed=11)
    c = run_monte_carlo(cfg, 70_000, seed=12)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)
    assert a.meta == {"n_ports": 6, "aperture_w": 0.9, "rayleigh_scale": 1 / math.sqrt(2), "seed": 11}
    assert np.all(a.values > 0)


def test_monte_carlo_requires_seed_and_count():
    cfg = SystemConfig(4, 2.0)
    with pytest.raises(DomainError):
        run_monte_carlo(cfg, 10, seed=None)
    with pytest.raises(DomainError):
        run_monte_carlo(cfg, 0, seed=1)


@pytest.mark.slow
def test_two_ports_far_apart_mean():
    s = run_monte_carlo(SystemConfig(2, 5.0), 1_000_000, seed=21)
    assert abs(s.values.mean() / MEAN_MAX_TWO_RAYLEIGH - 1) < 0.01


@pytest.mark.slow
def test_two_seed_self_consistency():
    a = fas_samples(10, 0.5)
    b = fas_samples(10, 0.5, seed=777)
    assert abs(empirical_cdf(a, 1.5) - empirical_cdf(b, 1.5)) <= 0.005


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="adjacent spacing 0.556 wavelengths still carries J0 = -0.38; measured KS is 0.052",
)
def test_wide_aperture_approaches_iid():
    s = run_monte_carlo(SystemConfig(10, 5.0), 1_000_000, seed=8)
    assert ks_distance(s, lambda x: iid_max_cdf(x, 10)) < 0.02


@pytest.mark.slow
def test_stochastic_dominance_in_ports():
    xs = [1.0, 1.3, 1.6]
    sets = [run_monte_carlo(SystemConfig(n, 1.0), 200_000, seed=n) for n in (5, 10, 20)]
    for x in xs:
        cdfs = [empirical_cdf(s, x) for s in sets]
        assert cdfs[0] >= cdfs[1] - 0.005 >= cdfs[2] - 0.01


def test_empirical_cdf_examples():
    s = SampleSet(np.array([3.0, 1.0, 2.0, 5.0, 4.0]))
    assert empirical_cdf(s, 0.5) == 0.0
    assert empirical_cdf(s, 5.0) == 1.0
    assert empirical_cdf(s, 3.0) == pytest.approx(3 / 5)
    assert np.array_equal(empirical_cdf(s, [0.0, 2.0]), [0.0, 0.4])
    assert mc_outage(s, 2.0) == empirical_cdf(s, 2.0)
    with pytest.raises(DomainError):
        mc_outage(s, 0.0)


def test_empirical_quantile_examples():
    s = SampleSet(np.array([4.0, 2.0, 1.0, 3.0]))
    assert empirical_quantiles(s, 0.5) == 2.5
    assert empirical_quantiles(s, 0.125 + 1e-12) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        empirical_quantiles(s, [0.5, 1.0])


def test_gumbel_median_from_samples():
    rng = np.random.default_rng(0)
    s = SampleSet(rng.gumbel(0.0, 1.0, 1_000_000))
    assert abs(empirical_quantiles(s, 0.5) - GUMBEL_MEDIAN) < 0.01


@given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=50),
       st.lists(st.floats(0.001, 0.999), min_size=2, max_size=10))
@settings(max_examples=100)
def test_quantiles_monotone_and_in_range(values, probs):
    s = SampleSet(np.array(values))
    q = empirical_quantiles(s, sorted(probs))
    assert np.all(np.diff(q) >= 0)
    assert q.min() >= min(values) and q.max() <= max(values)


def test_capacity_examples():
    assert mc_capacity(SampleSet(np.zeros(4)), 10.0) == 0.0
    assert mc_capacity(SampleSet(np.array([0.7])), 3.0) == math.log1p(0.7 * 0.7 * 3.0)
    with pytest.raises(DomainError):
        mc_capacity(SampleSet(np.array([0.7])), 0.0)


def test_single_port_capacity_closed_form():
    f = eigen_decompose(np.eye(1))
    h = sample_channels(f, np.random.default_rng(17), 1_000_000)
    s = SampleSet(fas_gain(h))
    assert abs(mc_capacity(s, 10.0) / EXP_GAIN_CAPACITY_10 - 1) < 0.005


def test_csv_round_trip(tmp_path):
    s = run_monte_carlo(SystemConfig(3, 0.7), 257, seed=4)
    path = tmp_path / "s.csv"
    s.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# n_ports,aperture_w,rayleigh_scale,seed,n_samples"
    assert lines[1].startswith("# 3,0.69999999999999996,")
    back = SampleSet.from_csv(path)
    assert np.array_equal(back.values, s.values)
    assert back.meta == s.meta


@pytest.mark.parametrize(
    "text",
    [
        "",
        "1.0\n2.0\n",
        "# n_ports,aperture_w,rayleigh_scale,seed,n_samples\n# 3,1,0.7,1,5\n1.0\n",
        "# n_ports,aperture_w,rayleigh_scale,seed,n_samples\n# 3,1,0.7,1\n1.0\n",
        "# n_ports,aperture_w,rayleigh_scale,seed,n_samples\n# 3,1,0.7,1,1\nnan\n",
    ],
)
def test_csv_rejects_corrupt(text):
    with pytest.raises(ValueError):
        parse_csv(text)


def test_synthetic_meta_round_trip():
    s = SampleSet(np.array([1.0, 2.0]))
    back = parse_csv(format_csv(s))
    assert back.meta == {"n_ports": None, "aperture_w": None, "rayleigh_scale": None, "seed": None}


def test_exact_iid_maxima_match_brute_force():
    exact = iid_rayleigh_maxima(16, 200_000, seed=1)
    brute = iid_rayleigh_maxima(16, 200_000, seed=2, exact=False)
    cdf = lambda x: iid_max_cdf(x, 16)
    assert ks_distance(exact, cdf) < 0.005
    assert ks_distance(brute, cdf) < 0.005
