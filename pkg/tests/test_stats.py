import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats as sps

from combwalk.stats import (
    KS_CRIT,
    ks2_critical,
    ks_2samp,
    ks_critical,
    ks_lattice_corrected,
    ks_statistic,
    total_variation,
)

samples = st.lists(st.integers(-20, 20), min_size=1, max_size=80)


def test_single_sample_at_median():
    assert ks_statistic([0.0], sps.norm.cdf) == 0.5


def test_empty_rejected():
    with pytest.raises(ValueError):
        ks_statistic([], sps.norm.cdf)
    with pytest.raises(ValueError):
        ks_2samp([], [1.0])


def test_model_samples_pass_critical_value():
    x = np.random.default_rng(2024).standard_normal(10_000)
    assert ks_statistic(x, sps.norm.cdf) < 1.628 / np.sqrt(10_000)


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=60))
def test_one_sample_matches_scipy(x):
    ours = ks_statistic(x, sps.norm.cdf)
    assert ours == pytest.approx(sps.kstest(x, "norm").statistic, abs=1e-12)


@given(samples, samples)
@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_two_sample_matches_scipy(a, b):
    assert ks_2samp(a, b) == pytest.approx(sps.ks_2samp(a, b).statistic, abs=1e-12)


@given(samples)
def test_two_sample_identical_is_zero(a):
    assert ks_2samp(a, a) == 0


def test_lattice_correction_removes_atom_bias():
    rng = np.random.default_rng(5)
    n = 400
    x = (2 * rng.binomial(n, 0.5, 20_000) - n) / np.sqrt(n)
    raw = ks_statistic(x, sps.norm.cdf)
    corrected = ks_lattice_corrected(x, sps.norm.cdf, 2 / np.sqrt(n))
    assert raw > 0.015 and corrected < 0.006  # atoms carry mass ~0.04 here


def test_critical_values():
    assert ks_critical(10_000, 1e-2) == pytest.approx(0.01628)
    assert ks2_critical(5000, 5000) == pytest.approx(KS_CRIT[1e-3] * np.sqrt(2 / 5000))
    assert ks2_critical(5000, 5000) < 0.04


def test_total_variation():
    assert total_variation([0.5, 0.5], [0.5, 0.5]) == 0
    assert total_variation([1, 0], [0, 1]) == 1
    assert total_variation([0.2, 0.8], [0.5, 0.5]) == pytest.approx(0.3)
