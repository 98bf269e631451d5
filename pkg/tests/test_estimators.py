import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from erpinfo import ClassConditionals, EntropyMethod, ErpChannelMI, RoiAverager, RoiMap, mutual_information


@pytest.fixture
def labelled(rng):
    n = 4000
    y = np.repeat(["hi", "lo"], n)
    roi = np.vstack([rng.normal(size=(n, 2)), rng.normal(scale=[2.0, 0.5], size=(n, 2))])
    X = np.repeat(roi, 3, axis=1) + 0.05 * rng.normal(size=(2 * n, 6))
    return X, y


def test_roi_averager(labelled):
    X, _ = labelled
    avg = RoiAverager([[0, 1, 2], [3, 4, 5]]).fit(X)
    out = avg.transform(X)
    assert out.shape == (X.shape[0], 2)
    assert np.allclose(out[:, 0], X[:, :3].mean(axis=1))
    assert list(avg.get_feature_names_out()) == ["R1", "R2"]
    assert RoiAverager().fit_transform(X).shape == X.shape


def test_roi_averager_errors(labelled):
    X, _ = labelled
    with pytest.raises(NotFittedError):
        RoiAverager().transform(X)
    with pytest.raises(ValueError):
        RoiAverager([[0, 9]]).fit(X)
    with pytest.raises(ValueError):
        RoiAverager().fit(X).transform(X[:, :3])


def test_pipeline_matches_functional_api(labelled):
    X, y = labelled
    pipe = make_pipeline(RoiAverager(RoiMap.contiguous(2, 3)), ErpChannelMI(method="quadrature"))
    pipe.fit(X, y)
    est = pipe[-1]
    Z = pipe[0].transform(X)
    C = [np.cov(Z[y == c], rowvar=False) for c in ("hi", "lo")]
    m = [Z[y == c].mean(axis=0) for c in ("hi", "lo")]
    ref = mutual_information(ClassConditionals(C[0], C[1], m[0], m[1]), EntropyMethod("quadrature"))
    assert est.mutual_information_ == pytest.approx(ref.mi_bits, abs=1e-12)
    assert list(est.classes_) == ["hi", "lo"]
    assert pipe.score(X, y) == est.mutual_information_
    assert 0.0 <= est.mutual_information_ <= 1.0
    assert est.output_entropy_ - est.conditional_entropy_ == pytest.approx(est.mutual_information_raw_)


def test_params_and_clone():
    est = ErpChannelMI(method="taylor", order=2, rounds=1, zero_mean=True)
    params = est.get_params()
    assert params["order"] == 2 and params["zero_mean"] is True
    twin = clone(est)
    assert twin.get_params() == params
    twin.set_params(order=4)
    assert est.order == 2
    assert est.entropy_method().schedule.rounds == 1


def test_errors(labelled):
    X, y = labelled
    with pytest.raises(ValueError):
        ErpChannelMI().fit(X, np.arange(X.shape[0]) % 3)
    with pytest.raises(ValueError):
        ErpChannelMI().fit(X[:6], y[:6])
    with pytest.raises(NotFittedError):
        ErpChannelMI().score()


def test_zero_mean_option(labelled):
    X, y = labelled
    est = ErpChannelMI(method="taylor", zero_mean=True).fit(RoiAverager([[0], [3]]).fit_transform(X), y)
    assert np.array_equal(est.conditionals_.mean1, np.zeros(2))
