"""Mutual information of a binary-input channel with Gaussian class conditionals.

Each trial holds blocks of multichannel samples labelled ``x1`` or ``x2``.
Channels are averaged within regions of interest (ROIs), the two
class-conditional Gaussians are estimated from the pooled ROI vectors, and

    I(X; Y) = h(Y) - h(Y | X)

is evaluated in bits: ``h(Y | X)`` in closed form and ``h(Y)`` for the
equal-weight two-component output mixture with a chosen entropy estimator.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from ._validation import as_spd_matrix
from .bootstrap import BootstrapResult, BootstrapSpec, bootstrap_t_ci, median
from .entropy import EntropyMethod, estimate_entropy
from .exceptions import ErpInfoError, EstimationError, InputError, NumericError
from .mixture import equal_weight_pair

logger = logging.getLogger(__name__)

LABELS = ("x1", "x2")
RIDGE = 1e-8
_LN2 = math.log(2.0)
_LOG2_2PIE = math.log2(2.0 * math.pi * math.e)


@dataclass(frozen=True)
class RoiMap:
    """Ordered ``(name, channel indices)`` pairs; channels are disjoint."""

    rois: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self):
        rois = tuple((str(name), tuple(int(c) for c in chans)) for name, chans in self.rois)
        if not rois:
            raise InputError("an ROI map needs at least one region")
        seen: set[int] = set()
        for name, chans in rois:
            if not chans:
                raise InputError(f"ROI {name!r} has no channels")
            if min(chans) < 0:
                raise InputError(f"ROI {name!r} has a negative channel index")
            overlap = seen.intersection(chans)
            if overlap or len(set(chans)) != len(chans):
                raise InputError(f"ROI {name!r} reuses channels {sorted(overlap) or chans}")
            seen.update(chans)
        object.__setattr__(self, "rois", rois)

    @property
    def n(self) -> int:
        return len(self.rois)

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.rois]

    @property
    def max_channel(self) -> int:
        return max(max(chans) for _, chans in self.rois)

    @classmethod
    def contiguous(cls, n_rois: int, per_roi: int) -> "RoiMap":
        return cls(tuple((f"R{i + 1}", tuple(range(i * per_roi, (i + 1) * per_roi))) for i in range(n_rois)))

    def permuted(self, order: Sequence[int]) -> "RoiMap":
        return RoiMap(tuple(self.rois[i] for i in order))

    def to_dict(self) -> dict:
        return {"rois": [{"name": name, "channels": list(chans)} for name, chans in self.rois]}

    @classmethod
    def from_dict(cls, data: dict) -> "RoiMap":
        try:
            return cls(tuple((r["name"], r["channels"]) for r in data["rois"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed ROI map: {exc}") from exc


@dataclass(frozen=True, eq=False)
class Block:
    label: str
    samples: np.ndarray
    sample_rate_hz: float
    block_id: str = ""

    def __post_init__(self):
        if self.label not in LABELS:
            raise InputError(f"block label must be one of {LABELS}, got {self.label!r}")
        x = np.asarray(self.samples, dtype=float)
        if x.ndim != 2 or x.shape[0] == 0:
            raise InputError(f"block samples must be a nonempty (time x channels) matrix, got {x.shape}")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)


@dataclass(frozen=True, eq=False)
class Trial:
    id: str
    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        widths = {b.samples.shape[1] for b in blocks}
        if len(widths) > 1:
            raise InputError(f"trial {self.id!r}: blocks have different channel counts {sorted(widths)}")
        object.__setattr__(self, "blocks", blocks)

    def labels(self) -> set[str]:
        return {b.label for b in self.blocks}


@dataclass(frozen=True, eq=False)
class ErpDataset:
    trials: tuple[Trial, ...]

    def __post_init__(self):
        object.__setattr__(self, "trials", tuple(self.trials))

    def __len__(self):
        return len(self.trials)


@dataclass(frozen=True, eq=False)
class ClassConditionals:
    C1: np.ndarray
    C2: np.ndarray
    mean1: np.ndarray
    mean2: np.ndarray

    def __post_init__(self):
        c1 = as_spd_matrix(self.C1, "C1", rtol=1e-10)
        c2 = as_spd_matrix(self.C2, "C2", rtol=1e-10)
        if c1.shape != c2.shape:
            raise InputError(f"C1 {c1.shape} and C2 {c2.shape} differ in shape")
        object.__setattr__(self, "C1", c1)
        object.__setattr__(self, "C2", c2)
        object.__setattr__(self, "mean1", np.asarray(self.mean1, dtype=float).reshape(-1))
        object.__setattr__(self, "mean2", np.asarray(self.mean2, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return self.C1.shape[0]

    @classmethod
    def zero_mean(cls, C1, C2) -> "ClassConditionals":
        C1 = np.atleast_2d(np.asarray(C1, dtype=float))
        n = C1.shape[0]
        return cls(C1, C2, np.zeros(n), np.zeros(n))

    def permuted(self, order: Sequence[int]) -> "ClassConditionals":
        ix = np.asarray(order)
        return ClassConditionals(
            self.C1[np.ix_(ix, ix)], self.C2[np.ix_(ix, ix)], self.mean1[ix], self.mean2[ix]
        )

    def mixture(self):
        return equal_weight_pair(self.C1, self.C2, self.mean1, self.mean2)


def reduce_to_rois(samples, roi_map: RoiMap) -> np.ndarray:
    """Average the channels of every ROI: ``(time x channels) -> (time x n)``."""
    x = samples.samples if isinstance(samples, Block) else np.asarray(samples, dtype=float)
    if x.ndim != 2:
        raise InputError(f"expected a (time x channels) matrix, got shape {x.shape}")
    if roi_map.max_channel >= x.shape[1]:
        raise InputError(f"ROI map references channel {roi_map.max_channel}, data has {x.shape[1]} channels")
    return np.column_stack([x[:, list(chans)].mean(axis=1) for _, chans in roi_map.rois])


def _regularize(cov: np.ndarray, name: str) -> np.ndarray:
    cov = 0.5 * (cov + cov.T)
    if np.linalg.eigvalsh(cov)[0] <= 0:
        n = cov.shape[0]
        cov = cov + RIDGE * np.trace(cov) / n * np.eye(n)
        if np.linalg.eigvalsh(cov)[0] <= 0:
            raise NumericError(f"{name} is singular even after ridge regularization")
    return cov


def _pooled_variances(blocks: list[Block], roi_map: RoiMap, zero_mean: bool) -> np.ndarray:
    # every electrode of an ROI treated as one realization of the ROI process
    out = []
    for _, chans in roi_map.rois:
        vals = np.concatenate([b.samples[:, list(chans)].ravel() for b in blocks])
        out.append(np.mean(vals * vals) if zero_mean else np.var(vals, ddof=1))
    return np.asarray(out)


def estimate_class_conditionals(
    trial: Trial,
    roi_map: RoiMap,
    zero_mean: bool = False,
    roi_variance: str = "mean",
    min_blocks_per_label: int = 2,
) -> ClassConditionals:
    """Sample means and unbiased covariances of the ROI vectors per label.

    ``roi_variance="pooled"`` replaces the diagonal with variances computed
    over all electrode samples of each ROI; off-diagonals always come from
    ROI means.
    """
    if roi_variance not in ("mean", "pooled"):
        raise InputError(f"roi_variance must be 'mean' or 'pooled', got {roi_variance!r}")
    covs, means = [], []
    for label in LABELS:
        blocks = [b for b in trial.blocks if b.label == label]
        if len(blocks) < min_blocks_per_label:
            raise EstimationError(
                f"trial {trial.id!r}: {len(blocks)} block(s) labelled {label}, need {min_blocks_per_label}"
            )
        y = np.vstack([reduce_to_rois(b, roi_map) for b in blocks])
        n_obs, n = y.shape
        if n_obs <= n:
            raise EstimationError(f"trial {trial.id!r}: {n_obs} samples for label {label}, need more than {n}")
        if zero_mean:
            mu = np.zeros(n)
            cov = y.T @ y / n_obs
        else:
            mu = y.mean(axis=0)
            d = y - mu
            cov = d.T @ d / (n_obs - 1)
        if roi_variance == "pooled":
            np.fill_diagonal(cov, _pooled_variances(blocks, roi_map, zero_mean))
        covs.append(_regularize(cov, f"trial {trial.id!r} covariance for {label}"))
        means.append(mu)
    return ClassConditionals(covs[0], covs[1], means[0], means[1])


def gaussian_entropy_bits(cov: np.ndarray) -> float:
    n = cov.shape[0]
    _, logdet = np.linalg.slogdet(cov)
    return 0.5 * (n * _LOG2_2PIE + logdet / _LN2)


def conditional_entropy_bits(cc: ClassConditionals) -> float:
    """``h(Y|X)`` for equiprobable inputs: the mean of the two Gaussian entropies."""
    return 0.5 * (gaussian_entropy_bits(cc.C1) + gaussian_entropy_bits(cc.C2))


def output_entropy_bits(cc: ClassConditionals, method: EntropyMethod | None = None) -> float:
    return output_entropy(cc, method).bits


def output_entropy(cc: ClassConditionals, method: EntropyMethod | None = None):
    """Entropy estimate of the output mixture ``0.5 N1 + 0.5 N2``."""
    return estimate_entropy(cc.mixture(), method)


@dataclass(frozen=True)
class MiEstimate:
    mi_bits: float
    raw_bits: float
    output_entropy_bits: float
    conditional_entropy_bits: float
    stderr_bits: float | None = None

    def __float__(self):
        return self.mi_bits


def mutual_information(cc: ClassConditionals, method: EntropyMethod | None = None) -> MiEstimate:
    """MI in bits, clamped to ``[0, 1]``; the unclamped value is kept as ``raw_bits``."""
    est = output_entropy(cc, method)
    h_cond = conditional_entropy_bits(cc)
    raw = est.bits - h_cond
    clamped = min(max(raw, 0.0), 1.0)
    if clamped != raw:
        logger.debug("MI %.6f bits clamped to %.6f", raw, clamped)
    return MiEstimate(clamped, raw, est.bits, h_cond, est.stderr_bits)


def mutual_information_bits(cc: ClassConditionals, method: EntropyMethod | None = None) -> float:
    return mutual_information(cc, method).mi_bits


@dataclass(frozen=True)
class TrialMi:
    trial_id: str
    mi_bits: float | None
    raw_bits: float | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def per_trial_mi(
    dataset: ErpDataset,
    roi_map: RoiMap,
    method: EntropyMethod | None = None,
    zero_mean: bool = False,
    roi_variance: str = "mean",
) -> list[TrialMi]:
    """Independent MI estimate for every trial, in input order.

    A failing trial is reported with its error message instead of aborting
    the batch.
    """
    out = []
    for trial in dataset.trials:
        try:
            cc = estimate_class_conditionals(trial, roi_map, zero_mean, roi_variance)
            mi = mutual_information(cc, method)
        except ErpInfoError as exc:
            logger.warning("trial %s failed: %s", trial.id, exc)
            out.append(TrialMi(trial.id, None, error=str(exc)))
            continue
        out.append(TrialMi(trial.id, mi.mi_bits, mi.raw_bits))
    return out


@dataclass
class MiReport:
    per_trial: list[TrialMi]
    median_bits: float | None
    ci: BootstrapResult | None = None
    config: dict = field(default_factory=dict)

    @property
    def per_trial_mi_bits(self) -> list[float]:
        return [t.mi_bits for t in self.per_trial if t.ok]

    def to_dict(self) -> dict:
        from . import __version__

        return {
            "schema": "erpinfo.mi_report/1",
            "version": __version__,
            "per_trial": [
                {"trial_id": t.trial_id, "mi_bits": t.mi_bits, "raw_mi_bits": t.raw_bits, "error": t.error}
                for t in self.per_trial
            ],
            "median_bits": self.median_bits,
            "ci_bits": None if self.ci is None else {"low": self.ci.ci_low, "high": self.ci.ci_high},
            "config": self.config,
        }


def mi_report(
    dataset: ErpDataset,
    roi_map: RoiMap,
    method: EntropyMethod | None = None,
    zero_mean: bool = False,
    bootstrap: BootstrapSpec | None = None,
    roi_variance: str = "mean",
) -> MiReport:
    method = EntropyMethod() if method is None else method
    results = per_trial_mi(dataset, roi_map, method, zero_mean, roi_variance)
    values = [r.mi_bits for r in results if r.ok]
    med = median(values) if values else None
    ci = bootstrap_t_ci(values, bootstrap) if bootstrap is not None and values else None
    config = {
        "estimator": method.to_dict(),
        "zero_mean": zero_mean,
        "roi_variance": roi_variance,
        "rois": roi_map.to_dict()["rois"],
    }
    if bootstrap is not None:
        config["bootstrap"] = {
            "B": bootstrap.B,
            "inner_B": bootstrap.inner_B,
            "levels": list(bootstrap.levels),
            "seed": bootstrap.seed,
        }
    return MiReport(results, med, ci, config)


# -- file formats -----------------------------------------------------------

def load_roi_map(path) -> RoiMap:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return RoiMap.from_dict(data)


def save_roi_map(roi_map: RoiMap, path) -> None:
    Path(path).write_text(json.dumps(roi_map.to_dict(), indent=2))


def dataset_to_frame(dataset: ErpDataset) -> pd.DataFrame:
    frames = []
    for trial in dataset.trials:
        for block in trial.blocks:
            m, c = block.samples.shape
            df = pd.DataFrame(block.samples, columns=[f"ch_{i}" for i in range(c)])
            df.insert(0, "t", np.arange(m) / block.sample_rate_hz)
            df.insert(0, "label", block.label)
            df.insert(0, "block_id", block.block_id)
            df.insert(0, "trial_id", trial.id)
            frames.append(df)
    if not frames:
        return pd.DataFrame(columns=["trial_id", "block_id", "label", "t"])
    return pd.concat(frames, ignore_index=True)


def write_dataset_csv(dataset: ErpDataset, path) -> None:
    dataset_to_frame(dataset).to_csv(path, index=False)


def _sample_rate(t: np.ndarray) -> float:
    if t.size < 2:
        return float("nan")
    dt = np.median(np.diff(t))
    if not dt > 0:
        raise InputError("time column must be increasing within a block")
    return float(1.0 / dt)


def read_dataset_csv(path) -> ErpDataset:
    """Parse ``trial_id,block_id,label,t,ch_0,...`` rows, one per time sample."""
    try:
        df = pd.read_csv(
            path, dtype={"trial_id": str, "block_id": str, "label": str}, float_precision="round_trip"
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot parse CSV ({exc})") from exc
    required = ["trial_id", "block_id", "label", "t"]
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise InputError(f"{path}: missing columns {missing}")
    channels = [c for c in df.columns if c.startswith("ch_")]
    if not channels:
        raise InputError(f"{path}: no ch_* columns")
    expected = [f"ch_{i}" for i in range(len(channels))]
    if channels != expected:
        raise InputError(f"{path}: channel columns must be ch_0..ch_{len(channels) - 1} in order")
    bad = set(df["label"].unique()) - set(LABELS)
    if bad:
        raise InputError(f"{path}: unknown labels {sorted(bad)}")
    values = df[channels].to_numpy(dtype=float)
    if not np.all(np.isfinite(values)):
        raise InputError(f"{path}: non-finite sample values")

    trials = []
    for trial_id, tdf in df.groupby("trial_id", sort=False):
        blocks = []
        for block_id, bdf in tdf.groupby("block_id", sort=False):
            labels = bdf["label"].unique()
            if len(labels) != 1:
                raise InputError(f"{path}: block {trial_id}/{block_id} mixes labels {list(labels)}")
            blocks.append(
                Block(labels[0], values[bdf.index.to_numpy()], _sample_rate(bdf["t"].to_numpy()), block_id)
            )
        trials.append(Trial(trial_id, tuple(blocks)))
    return ErpDataset(tuple(trials))
