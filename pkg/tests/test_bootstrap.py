import warnings

import numpy as np
import pytest

from erpinfo import BootstrapSpec, bootstrap_t_ci, median
from erpinfo.bootstrap import read_values
from erpinfo.exceptions import InputError

SMALL = BootstrapSpec(B=300, inner_B=40, seed=5)


@pytest.mark.parametrize(
    "xs,expected",
    [([1, 2, 3], 2.0), ([1, 2, 3, 10], 2.5), ([0.7, 0.1, 0.9, 0.4, 0.6], 0.6)],
)
def test_median_examples(xs, expected):
    assert median(xs) == expected


def test_median_empty():
    with pytest.raises(InputError):
        median([])


def test_constant_samples_zero_width():
    assert bootstrap_t_ci([0.7] * 5) == (0.7, 0.7, 0.7)


def test_tiny_sample_warns():
    with pytest.warns(UserWarning):
        res = bootstrap_t_ci([0.2, 0.5])
    assert (res.ci_low, res.ci_high) == (0.2, 0.5)


def test_rejects_bad_input():
    with pytest.raises(InputError):
        bootstrap_t_ci([])
    with pytest.raises(InputError):
        bootstrap_t_ci([1.0, float("nan"), 2.0])
    with pytest.raises(InputError):
        BootstrapSpec(levels=(97.5, 2.5))
    with pytest.raises(InputError):
        BootstrapSpec(B=1)


def test_deterministic_and_seed_sensitive(rng):
    x = rng.exponential(size=28)
    assert bootstrap_t_ci(x, SMALL) == bootstrap_t_ci(x, SMALL)
    other = BootstrapSpec(B=300, inner_B=40, seed=6)
    assert bootstrap_t_ci(x, other) != bootstrap_t_ci(x, SMALL)


def test_interval_ordered(rng):
    for seed in range(20):
        x = rng.standard_t(3, size=15)
        res = bootstrap_t_ci(x, BootstrapSpec(B=100, inner_B=20, seed=seed))
        assert res.ci_low <= res.ci_high


def test_shift_scale_equivariance(rng):
    x = rng.normal(size=28)
    a, c = 3.7, -12.5
    base = bootstrap_t_ci(x, SMALL)
    moved = bootstrap_t_ci(a * x + c, SMALL)
    for u, v in zip(moved, base):
        assert u == pytest.approx(a * v + c, abs=1e-12 * (abs(c) + a))


def test_width_grows_with_dispersion():
    widths = {1: [], 2: []}
    for seed in range(100):
        x = np.random.default_rng(seed).normal(size=28)
        m = np.median(x)
        for k in widths:
            res = bootstrap_t_ci(m + k * (x - m), BootstrapSpec(B=100, inner_B=20, seed=seed))
            widths[k].append(res.ci_high - res.ci_low)
    assert np.mean(widths[2]) >= np.mean(widths[1])


def test_zero_spread_resamples_are_skipped():
    # mostly identical values: many nested resamples have zero spread
    x = np.array([1.0] * 25 + [1.5, 2.0, 3.0])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        res = bootstrap_t_ci(x, SMALL)
    assert np.isfinite([res.ci_low, res.ci_high]).all()


def test_read_values(tmp_path):
    path = tmp_path / "v.txt"
    path.write_text("# header\n0.1, 0.2\n0.3 0.4  # trailing\n\n5e-1\n")
    assert read_values(path) == [0.1, 0.2, 0.3, 0.4, 0.5]
    path.write_text("0.1 abc\n")
    with pytest.raises(InputError):
        read_values(path)
