import math

import numpy as np
import pytest
from scipy import integrate, stats

from conftest import fig7, random_mixture, random_spd
from erpinfo import (
    SPLIT_LIBRARY,
    GaussianMixture,
    SplitSchedule,
    entropy_quadrature,
    entropy_taylor,
    entropy_with_splitting,
    select_split_target,
    split_component,
)
from erpinfo.exceptions import InputError, ResourceError
from erpinfo.taylor import TargetRule, load_split_library_fixture, principal_axis, refine_mixture, taylor_terms

HALF_LN_2PIE = 0.5 * math.log(2 * math.pi * math.e)


def test_standard_normal_order_two():
    est = entropy_taylor(GaussianMixture.single([0.0], [[1.0]]), order=2)
    assert est.nats == pytest.approx(HALF_LN_2PIE, abs=1e-15)
    assert est.bits == pytest.approx(HALF_LN_2PIE / math.log(2), abs=1e-15)


def test_order_zero_is_log_density_at_means(rng):
    g = random_mixture(rng, 2, 3)
    expected = -float(np.dot(g.weights, g.logpdf(g.means)))
    assert entropy_taylor(g, order=0).nats == pytest.approx(expected, rel=1e-14)


def test_scalar_pair_terms_by_hand():
    # 0.5 N(0,1) + 0.5 N(0,16) expanded at 0: p''/p = -13/16, p''''/p = 3 * 1025/1024 * 4/5
    g = GaussianMixture.from_arrays([0.5, 0.5], [[0.0], [0.0]], [[[1.0]], [[16.0]]])
    h0, h2, h4 = taylor_terms(g, 4)
    assert h0 == pytest.approx(-math.log(0.625 / math.sqrt(2 * math.pi)), rel=1e-14)
    assert h2 == pytest.approx(0.5 * 13 / 16 * 8.5, rel=1e-14)
    f4 = 3 * 1025 / 1024 * 4 / 5 - 3 * (13 / 16) ** 2
    assert h4 == pytest.approx(-f4 * 3 * (0.5 + 0.5 * 256) / 24, rel=1e-13)


def test_fourth_moment_modes_differ_by_pairing_count(rng):
    g = random_mixture(rng, 3, 3)
    full = taylor_terms(g, 4, "full")[2]
    single = taylor_terms(g, 4, "kronecker")[2]
    assert full == pytest.approx(3 * single, rel=1e-12)


def test_fig7_p0_close_to_quadrature():
    g = fig7(0)
    assert entropy_taylor(g, 4).nats == pytest.approx(entropy_quadrature(g).nats, rel=0.02)


def test_library_fixture_matches_constants():
    assert load_split_library_fixture() == SPLIT_LIBRARY
    assert sum(e.weight for e in SPLIT_LIBRARY[2]) == 1.0
    assert abs(sum(e.weight for e in SPLIT_LIBRARY[4]) - 1.0) <= 1e-5


def test_split_diagonal_two_way():
    g = GaussianMixture.single([1.0, -2.0], np.diag([9.0, 1.0]))
    out = split_component(g, 0, ways=2)
    assert len(out) == 2
    for comp, sign in zip(out.components, (-1, 1)):
        assert np.allclose(comp.mean, [1.0 + sign * 3 * 0.56520, -2.0], rtol=0, atol=1e-15)
        assert np.allclose(comp.cov, np.diag([9 * 0.7745125**2, 1.0]), rtol=1e-15, atol=0)
        assert comp.weight == 0.5


def _l1_gap(ways):
    g = split_component(GaussianMixture.single([0.0], [[1.0]]), 0, ways)
    f = lambda y: abs(float(g.pdf(np.array([[y]]))[0]) - stats.norm.pdf(y))
    return integrate.quad(f, -12, 12, points=[-2, -1, 0, 1, 2], limit=500)[0]


def test_split_l1_residuals():
    assert _l1_gap(2) < 0.08
    assert _l1_gap(4) < 0.03


def test_split_conserves_weight(rng):
    g = random_mixture(rng, 3, 4)
    for idx in range(4):
        out = split_component(g, idx, ways=4)
        assert math.fsum(out.weights) == pytest.approx(1.0, abs=1e-9)
        sub = out.weights[idx : idx + 4].sum()
        assert sub == pytest.approx(g.weights[idx], rel=1e-12)


def test_split_preserves_mean_and_shrinks_axis_variance(rng):
    cov = random_spd(rng, 3)
    g = GaussianMixture.single([0.5, 0.0, -1.0], cov)
    out = split_component(g, 0, 4)
    mean = out.weights @ out.means
    assert np.allclose(mean, g.means[0], atol=1e-12)
    lam, v = principal_axis(cov)
    for comp in out.components:
        assert v @ comp.cov @ v == pytest.approx(0.5175126**2 * lam, rel=1e-12)


def test_split_index_out_of_range():
    with pytest.raises(InputError):
        split_component(GaussianMixture.single([0.0], [[1.0]]), 1)
    with pytest.raises(InputError):
        split_component(GaussianMixture.single([0.0], [[1.0]]), 0, ways=3)


def test_select_split_target_examples():
    two = GaussianMixture.from_arrays([0.5, 0.5], [[0.0], [0.0]], [[[1.0]], [[9.0]]])
    assert select_split_target(two) == 1
    same = GaussianMixture.from_arrays([0.25] * 4, np.zeros((4, 2)), [np.eye(2)] * 4)
    assert select_split_target(same) == 0
    assert select_split_target(fig7(20)) == 1


def test_principal_axis_ties_and_sign():
    lam, v = principal_axis(np.eye(3) * 2.0)
    assert lam == 2.0
    assert v[np.flatnonzero(np.abs(v) > 1e-12)[0]] > 0


def test_rounds_zero_is_plain_taylor(rng):
    g = random_mixture(rng, 2, 3)
    assert entropy_with_splitting(g, 4, SplitSchedule(rounds=0)).nats == entropy_taylor(g, 4).nats


def test_component_counts_per_rule():
    g = fig7(10)
    assert len(refine_mixture(g, SplitSchedule(4, 2))) == 32
    assert len(refine_mixture(g, SplitSchedule(4, 3, "largest-eigenvalue"))) == 2 + 3 * 3
    assert len(refine_mixture(g, SplitSchedule(2, 3, TargetRule.LARGEST_EIGENVALUE))) == 5


def test_component_cap():
    with pytest.raises(ResourceError):
        entropy_with_splitting(fig7(0), 4, SplitSchedule(4, 4))
    est = entropy_with_splitting(fig7(0), 4, SplitSchedule(4, 4), max_components=512)
    assert est.n_components == 512


def test_schedule_validation():
    with pytest.raises(InputError):
        SplitSchedule(ways=3)
    with pytest.raises(InputError):
        SplitSchedule(rounds=-1)
    with pytest.raises(InputError):
        SplitSchedule(target_rule="random")
    with pytest.raises(InputError):
        entropy_taylor(fig7(0), order=1)


def test_split_estimate_of_single_gaussian_drifts_low():
    # the library's 4-way split has variance 0.927 along the axis, so every round
    # lowers the entropy of the refined mixture itself
    g = GaussianMixture.single([0.0], [[1.0]])
    errs = [entropy_with_splitting(g, 4, SplitSchedule(4, r)).nats - HALF_LN_2PIE for r in (1, 2)]
    assert errs[1] < errs[0] < 0


@pytest.mark.xfail(strict=True, reason="order-4 split estimate of a Gaussian is off by 0.05-0.09 nats (ledger)")
@pytest.mark.parametrize("ways", [2, 4])
def test_split_single_gaussian_within_5e_3(ways):
    g = GaussianMixture.single([0.0], [[1.0]])
    est = entropy_with_splitting(g, 4, SplitSchedule(ways, 2))
    assert est.nats == pytest.approx(HALF_LN_2PIE, abs=5e-3)


@pytest.mark.xfail(strict=True, reason="splitting destabilises the order-4 expansion at p=40 (ledger)")
def test_split_not_worse_at_p40():
    g = fig7(40)
    ref = entropy_quadrature(g).nats
    split = entropy_with_splitting(g, 4, SplitSchedule(4, 2)).nats
    plain = entropy_taylor(g, 4).nats
    assert abs(split - ref) <= abs(plain - ref)


def test_estimate_serialization():
    est = entropy_with_splitting(fig7(5), 4, SplitSchedule(4, 1))
    d = est.to_dict()
    assert d["method"] == "taylor-split"
    assert d["schedule"] == {"ways": 4, "rounds": 1, "target_rule": "all-components"}
    assert d["n_components"] == 8
