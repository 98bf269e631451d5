"""scikit-learn compatible front end.

``RoiAverager`` turns channel matrices into ROI matrices and
``ErpChannelMI`` fits the two class-conditional Gaussians from labelled
samples and exposes the channel's mutual information, so that::

    make_pipeline(RoiAverager(rois), ErpChannelMI()).fit(X, y)

works like any other sklearn pipeline.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .entropy import EntropyMethod
from .erp import ClassConditionals, RoiMap, _regularize, mutual_information, reduce_to_rois
from .oracles import McSpec
from .taylor import SplitSchedule


class RoiAverager(TransformerMixin, BaseEstimator):
    """Average groups of channels.

    Parameters
    ----------
    rois : RoiMap, list of channel-index lists, or None
        ``None`` keeps every channel as its own region.
    """

    def __init__(self, rois=None):
        self.rois = rois

    def fit(self, X, y=None):
        X = check_array(X)
        self.n_features_in_ = X.shape[1]
        if self.rois is None:
            self.roi_map_ = RoiMap.contiguous(X.shape[1], 1)
        elif isinstance(self.rois, RoiMap):
            self.roi_map_ = self.rois
        else:
            self.roi_map_ = RoiMap(tuple((f"R{i + 1}", chans) for i, chans in enumerate(self.rois)))
        if self.roi_map_.max_channel >= X.shape[1]:
            raise ValueError(
                f"ROI map references channel {self.roi_map_.max_channel}, X has {X.shape[1]} features"
            )
        return self

    def transform(self, X):
        check_is_fitted(self, "roi_map_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return reduce_to_rois(X, self.roi_map_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "roi_map_")
        return np.asarray(self.roi_map_.names, dtype=object)


class ErpChannelMI(BaseEstimator):
    """Mutual information between a binary label and Gaussian samples.

    Parameters
    ----------
    method : {"taylor-split", "taylor", "quadrature", "monte-carlo"}
        Estimator for the entropy of the two-component output mixture.
    order : {0, 2, 4}
        Taylor order (Taylor methods only).
    ways, rounds, target_rule
        Variance-split schedule for ``"taylor-split"``.
    zero_mean : bool
        Force both class means to zero instead of estimating them.
    mc_samples, random_state
        Monte Carlo sample count and seed.

    Attributes
    ----------
    classes_ : ndarray of shape (2,)
    conditionals_ : ClassConditionals
    mutual_information_ : float
        MI in bits, clamped to ``[0, 1]``.
    mutual_information_raw_ : float
    output_entropy_ : float
        ``h(Y)`` in bits.
    conditional_entropy_ : float
        ``h(Y|X)`` in bits.
    """

    def __init__(
        self,
        method="taylor-split",
        order=4,
        ways=4,
        rounds=2,
        target_rule="all-components",
        zero_mean=False,
        mc_samples=1_000_000,
        random_state=0,
    ):
        self.method = method
        self.order = order
        self.ways = ways
        self.rounds = rounds
        self.target_rule = target_rule
        self.zero_mean = zero_mean
        self.mc_samples = mc_samples
        self.random_state = random_state

    def entropy_method(self) -> EntropyMethod:
        return EntropyMethod(
            name=self.method,
            order=self.order,
            schedule=SplitSchedule(self.ways, self.rounds, self.target_rule),
            mc=McSpec(self.mc_samples, 0 if self.random_state is None else int(self.random_state)),
        )

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_min_samples=2)
        self.classes_, y_idx = np.unique(y, return_inverse=True)
        if self.classes_.size != 2:
            raise ValueError(f"need exactly two classes, got {self.classes_.size}")
        self.n_features_in_ = X.shape[1]
        covs, means = [], []
        for k in range(2):
            Xk = X[y_idx == k]
            if Xk.shape[0] <= X.shape[1]:
                raise ValueError(f"class {self.classes_[k]!r} has {Xk.shape[0]} samples for {X.shape[1]} features")
            if self.zero_mean:
                mu = np.zeros(X.shape[1])
                cov = Xk.T @ Xk / Xk.shape[0]
            else:
                mu = Xk.mean(axis=0)
                cov = np.cov(Xk, rowvar=False, ddof=1).reshape(X.shape[1], X.shape[1])
            covs.append(_regularize(cov, f"class {self.classes_[k]!r} covariance"))
            means.append(mu)
        self.conditionals_ = ClassConditionals(covs[0], covs[1], means[0], means[1])
        est = mutual_information(self.conditionals_, self.entropy_method())
        self.mutual_information_ = est.mi_bits
        self.mutual_information_raw_ = est.raw_bits
        self.output_entropy_ = est.output_entropy_bits
        self.conditional_entropy_ = est.conditional_entropy_bits
        return self

    def score(self, X=None, y=None):
        """The fitted mutual information in bits (inputs are ignored)."""
        check_is_fitted(self, "mutual_information_")
        return self.mutual_information_
