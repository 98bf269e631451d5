"""Synthetic labelled multichannel datasets with planted class covariances."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import cholesky

from ._validation import as_spd_matrix
from .erp import LABELS, Block, ErpDataset, RoiMap, Trial
from .exceptions import InputError


@dataclass(frozen=True, eq=False)
class SynthConfig:
    """Planted model: per block, i.i.d. ROI vectors ``N(0, C_label)``; each
    electrode carries its ROI value plus independent noise of std
    ``electrode_noise`` (default ``0.1 * sqrt(mean diag)`` of the planted
    covariances)."""

    C1: np.ndarray
    C2: np.ndarray
    trials: int = 20
    blocks_per_trial: int = 4
    electrodes_per_roi: int = 16
    block_seconds: float = 5.0
    sample_rate_hz: float = 1024.0
    electrode_noise: float | None = None
    seed: int = 0

    def __post_init__(self):
        c1 = as_spd_matrix(self.C1, "C1")
        c2 = as_spd_matrix(self.C2, "C2")
        if c1.shape != c2.shape:
            raise InputError("planted C1 and C2 must have the same shape")
        object.__setattr__(self, "C1", c1)
        object.__setattr__(self, "C2", c2)
        if self.trials < 0 or self.blocks_per_trial < 2 or self.electrodes_per_roi < 1:
            raise InputError("need trials >= 0, blocks_per_trial >= 2 and electrodes_per_roi >= 1")
        if not self.block_seconds > 0 or not self.sample_rate_hz > 0:
            raise InputError("block_seconds and sample_rate_hz must be positive")
        if self.samples_per_block < 1:
            raise InputError("a block must contain at least one sample")
        if self.electrode_noise is not None and self.electrode_noise < 0:
            raise InputError("electrode_noise must be nonnegative")

    @property
    def n_rois(self) -> int:
        return self.C1.shape[0]

    @property
    def n_channels(self) -> int:
        return self.n_rois * self.electrodes_per_roi

    @property
    def samples_per_block(self) -> int:
        return int(round(self.block_seconds * self.sample_rate_hz))

    @property
    def noise_std(self) -> float:
        if self.electrode_noise is not None:
            return float(self.electrode_noise)
        return 0.1 * float(np.sqrt(np.mean(np.concatenate([np.diag(self.C1), np.diag(self.C2)]))))

    def roi_map(self) -> RoiMap:
        return RoiMap.contiguous(self.n_rois, self.electrodes_per_roi)

    def to_dict(self) -> dict:
        return {
            "C1": self.C1.tolist(),
            "C2": self.C2.tolist(),
            "trials": self.trials,
            "blocks_per_trial": self.blocks_per_trial,
            "electrodes_per_roi": self.electrodes_per_roi,
            "block_seconds": self.block_seconds,
            "sample_rate_hz": self.sample_rate_hz,
            "electrode_noise": self.electrode_noise,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SynthConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise InputError(f"unknown synth config keys: {sorted(extra)}")
        if "C1" not in data or "C2" not in data:
            raise InputError("synth config needs planted covariances C1 and C2")
        return cls(**data)


def load_synth_config(path) -> SynthConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return SynthConfig.from_dict(data)


def synth_dataset(cfg: SynthConfig) -> ErpDataset:
    """Draw a dataset; block labels alternate ``x1, x2, x1, ...`` within each trial."""
    rng = np.random.default_rng(cfg.seed)
    factors = [cholesky(cfg.C1, lower=True), cholesky(cfg.C2, lower=True)]
    m, e = cfg.samples_per_block, cfg.electrodes_per_roi
    sigma_e = cfg.noise_std
    trials = []
    for t in range(cfg.trials):
        blocks = []
        for b in range(cfg.blocks_per_trial):
            k = b % 2
            roi = rng.standard_normal((m, cfg.n_rois)) @ factors[k].T
            chans = np.repeat(roi, e, axis=1)
            if sigma_e > 0:
                chans = chans + sigma_e * rng.standard_normal(chans.shape)
            blocks.append(Block(LABELS[k], chans, cfg.sample_rate_hz, f"b{b:02d}"))
        trials.append(Trial(f"trial{t:03d}", tuple(blocks)))
    return ErpDataset(tuple(trials))
