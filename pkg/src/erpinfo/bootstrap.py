"""Bootstrap-t percentile confidence intervals for a sample median."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import InputError

_CHUNK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class BootstrapSpec:
    B: int = 1000
    inner_B: int = 200
    levels: tuple[float, float] = (2.5, 97.5)
    seed: int = 0

    def __post_init__(self):
        if self.B < 2 or self.inner_B < 2:
            raise InputError("B and inner_B must both be >= 2")
        lo, hi = self.levels
        if not 0 < lo < hi < 100:
            raise InputError(f"levels must satisfy 0 < lo < hi < 100, got {self.levels}")
        object.__setattr__(self, "levels", (float(lo), float(hi)))


class BootstrapResult(NamedTuple):
    median: float
    ci_low: float
    ci_high: float


def median(samples) -> float:
    """Sample median; the mean of the two middle values for even counts."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise InputError("median of an empty sample")
    return float(np.median(x))


def _t_statistics(x: np.ndarray, spec: BootstrapSpec, rng: np.random.Generator):
    s = x.size
    m = np.median(x)
    outer = x[rng.integers(0, s, size=(spec.B, s))]
    outer_medians = np.median(outer, axis=1)
    # nested resamples of each outer resample give its own standard error
    inner_se = np.empty(spec.B)
    step = max(1, _CHUNK_ELEMENTS // (spec.inner_B * s))
    for start in range(0, spec.B, step):
        block = outer[start : start + step]
        idx = rng.integers(0, s, size=(block.shape[0], spec.inner_B, s))
        inner = np.take_along_axis(block[:, None, :], idx, axis=2)
        inner_se[start : start + step] = np.median(inner, axis=2).std(axis=1, ddof=1)
    ok = inner_se > 0
    t = (m - outer_medians[ok]) / (inner_se[ok] / math.sqrt(s))
    return m, outer_medians, t


def bootstrap_t_ci(samples, spec: BootstrapSpec | None = None) -> BootstrapResult:
    """Median and bootstrap-t interval of ``samples``.

    Each outer resample ``b`` contributes ``t_b = (M - M_b) / (se_b / sqrt(s))``
    with ``se_b`` from a nested bootstrap of that resample. The endpoints are
    ``M - t_q * se / sqrt(s)`` with ``t_q`` the empirical percentiles of the
    ``t_b`` and ``se`` the standard deviation of the outer medians.
    Resamples whose nested spread is zero carry no t-value and are skipped.
    """
    spec = BootstrapSpec() if spec is None else spec
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise InputError("bootstrap of an empty sample")
    if not np.all(np.isfinite(x)):
        raise InputError("samples contain non-finite values")
    m = median(x)
    if np.all(x == x[0]):
        return BootstrapResult(m, m, m)
    if x.size < 3:
        warnings.warn("fewer than 3 samples; reporting (min, max) as the interval", stacklevel=2)
        return BootstrapResult(m, float(x.min()), float(x.max()))

    rng = np.random.default_rng(spec.seed)
    m, outer_medians, t = _t_statistics(x, spec, rng)
    if t.size < 2:
        warnings.warn("nested bootstrap spread is zero almost everywhere; reporting (min, max)", stacklevel=2)
        return BootstrapResult(float(m), float(x.min()), float(x.max()))
    se = outer_medians.std(ddof=1)
    t_lo, t_hi = np.percentile(t, spec.levels)
    a = m - t_lo * se / math.sqrt(x.size)
    b = m - t_hi * se / math.sqrt(x.size)
    lo, hi = sorted((float(a), float(b)))
    return BootstrapResult(float(m), lo, hi)


def read_values(path) -> list[float]:
    """Numbers separated by whitespace, commas or newlines; ``#`` starts a comment."""
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0]
            for tok in line.replace(",", " ").split():
                try:
                    values.append(float(tok))
                except ValueError as exc:
                    raise InputError(f"{path}: cannot parse {tok!r} as a number") from exc
    return values
