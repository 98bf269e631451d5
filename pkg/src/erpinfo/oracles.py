"""Reference entropy estimators: tensor Simpson quadrature and Monte Carlo."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .exceptions import InputError, UnsupportedDimensionError
from .mixture import GaussianMixture
from .taylor import EntropyEstimate

DEFAULT_POINTS = {1: 2001, 2: 501, 3: 121}
DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration box half-width (in units of the largest component std) and grid size.

    ``points_per_dim=None`` selects 2001, 501 or 121 points for n = 1, 2, 3.
    """

    half_width_sigmas: float = 10.0
    points_per_dim: int | None = None

    def __post_init__(self):
        if not self.half_width_sigmas > 0:
            raise InputError("half_width_sigmas must be positive")
        m = self.points_per_dim
        if m is not None and (m < 3 or m % 2 == 0):
            raise InputError(f"points_per_dim must be odd and >= 3, got {m}")

    def points_for(self, dim: int) -> int:
        return DEFAULT_POINTS[dim] if self.points_per_dim is None else self.points_per_dim


@dataclass(frozen=True)
class McSpec:
    samples: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise InputError("samples must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")


def _grid_axes(gmm: GaussianMixture, spec: QuadratureSpec) -> list[np.ndarray]:
    # Box spans every component mean +- half_width * sigma_max (reduces to a
    # box around the common mean when all means coincide).
    reach = spec.half_width_sigmas * gmm.max_std()
    lo = gmm.means.min(axis=0) - reach
    hi = gmm.means.max(axis=0) + reach
    m = spec.points_for(gmm.dim)
    return [np.linspace(a, b, m) for a, b in zip(lo, hi)]


def entropy_quadrature(gmm: GaussianMixture, spec: QuadratureSpec | None = None) -> EntropyEstimate:
    """``-integral p ln p`` by iterated composite Simpson on a box, n <= 3."""
    spec = QuadratureSpec() if spec is None else spec
    if gmm.dim > 3:
        raise UnsupportedDimensionError(f"quadrature supports n <= 3, got n = {gmm.dim}")
    axes = _grid_axes(gmm, spec)
    mesh = np.meshgrid(*axes, indexing="ij")
    shape = mesh[0].shape
    pts = np.stack([g.ravel() for g in mesh], axis=1)

    integrand = np.empty(pts.shape[0])
    chunk = 1 << 18
    for start in range(0, pts.shape[0], chunk):
        lp = gmm.logpdf(pts[start : start + chunk])
        p = np.exp(lp)
        integrand[start : start + chunk] = np.where(p < DENSITY_FLOOR, 0.0, -p * lp)
    vals = integrand.reshape(shape)
    for ax in reversed(axes):
        vals = simpson(vals, x=ax, axis=-1)
    return EntropyEstimate(float(vals), "quadrature", n_components=len(gmm))


def entropy_monte_carlo(gmm: GaussianMixture, spec: McSpec | None = None) -> EntropyEstimate:
    """Sample mean of ``-ln p`` over draws from ``gmm``; deterministic in the seed."""
    spec = McSpec() if spec is None else spec
    rng = np.random.default_rng(spec.seed)
    chunk = 1 << 17
    total = 0.0
    total_sq = 0.0
    remaining = spec.samples
    while remaining:
        size = min(chunk, remaining)
        vals = -gmm.logpdf(gmm.sample(size, rng))
        total += math.fsum(vals)
        total_sq += math.fsum(vals * vals)
        remaining -= size
    n = spec.samples
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0) * n / (n - 1) if n > 1 else 0.0
    return EntropyEstimate(mean, "monte-carlo", stderr=math.sqrt(var / n), n_components=len(gmm))
