"""Analytical entropy bounds for ``0.5 N(0, s1^2) + 0.5 N(0, s2^2)``.

With ``m(y) = max(ln N1(y), ln N2(y))`` the Jacobian logarithm gives
``m <= ln(N1 + N2) <= m + slack``, hence

    upper = ln 2 - E_p[m]
    lower = upper - ln(1 + s2/s1)

The narrow component dominates on ``|y| < lam`` and the wide one outside,
so ``E_p[m]`` is a sum of zeroth and second truncated-normal moments over
``[0, lam]`` and ``[lam, inf)``, doubled by symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtr

from .exceptions import DegenerateInputError, InputError

_LN2 = math.log(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ScalarMixturePair:
    sigma1: float
    sigma2: float

    def __post_init__(self):
        s1, s2 = float(self.sigma1), float(self.sigma2)
        if not (math.isfinite(s1) and math.isfinite(s2)) or s1 <= 0 or s2 <= 0:
            raise InputError(f"standard deviations must be positive and finite, got {s1}, {s2}")
        if s1 > s2:
            raise InputError(f"sigma1 must not exceed sigma2 (got {s1} > {s2})")
        object.__setattr__(self, "sigma1", s1)
        object.__setattr__(self, "sigma2", s2)

    @property
    def degenerate(self) -> bool:
        return self.sigma1 == self.sigma2


@dataclass(frozen=True)
class EntropyBounds:
    lower: float
    upper: float

    @property
    def lower_bits(self) -> float:
        return self.lower / _LN2

    @property
    def upper_bits(self) -> float:
        return self.upper / _LN2


def _pair(pair_or_sigma1, sigma2=None) -> ScalarMixturePair:
    if isinstance(pair_or_sigma1, ScalarMixturePair):
        return pair_or_sigma1
    return ScalarMixturePair(pair_or_sigma1, sigma2)


def intersection_lambda(pair: ScalarMixturePair | float, sigma2: float | None = None) -> float:
    """Positive point where the two zero-mean component densities are equal."""
    pair = _pair(pair, sigma2)
    if pair.degenerate:
        raise DegenerateInputError("equal variances: the component densities coincide")
    v1, v2 = pair.sigma1**2, pair.sigma2**2
    # log1p form stays accurate when the ratio is close to 1
    ratio = v2 / v1
    return math.sqrt(v1 * v2 * math.log1p(ratio - 1.0) / (v2 - v1))


def _mass(sigma: float, a: float, b: float) -> float:
    """P(a <= Y <= b) for Y ~ N(0, sigma^2), 0 <= a <= b <= inf."""
    if math.isinf(b):
        return float(ndtr(-a / sigma))
    return float(ndtr(b / sigma) - ndtr(a / sigma))


def _second_moment(sigma: float, a: float, b: float) -> float:
    """E[Y^2; a <= Y <= b] for Y ~ N(0, sigma^2), 0 <= a <= b <= inf."""
    alpha = a / sigma
    phi_a = math.exp(-0.5 * alpha * alpha) / _SQRT_2PI
    tail = alpha * phi_a
    if not math.isinf(b):
        beta = b / sigma
        tail -= beta * math.exp(-0.5 * beta * beta) / _SQRT_2PI
    return sigma * sigma * (_mass(sigma, a, b) + tail)


def _upper_bound(pair: ScalarMixturePair, lam: float) -> float:
    """``ln 2 - E_p[max(ln N1, ln N2)]`` evaluated piecewise.

    On each piece the integrand is ``y^2/(2 s^2) + ln(2 sqrt(2 pi) s)``,
    i.e. ``-ln(N_s(y) / 2)``.
    """
    pieces = ((pair.sigma1, 0.0, lam), (pair.sigma2, lam, math.inf))
    total = 0.0
    for s_dom, a, b in pieces:
        const = math.log(2.0 * _SQRT_2PI * s_dom)
        for s in (pair.sigma1, pair.sigma2):
            total += _second_moment(s, a, b) / (2.0 * s_dom * s_dom) + const * _mass(s, a, b)
    return total


def entropy_bounds_1d(pair: ScalarMixturePair | float, sigma2: float | None = None) -> EntropyBounds:
    """Lower and upper bounds (nats) on the entropy of the equal-weight pair.

    For ``sigma1 == sigma2`` the mixture is a single Gaussian and both bounds
    equal its entropy.
    """
    pair = _pair(pair, sigma2)
    if pair.degenerate:
        exact = 0.5 * math.log(2.0 * math.pi * math.e * pair.sigma1**2)
        return EntropyBounds(exact, exact)
    lam = intersection_lambda(pair)
    upper = _upper_bound(pair, lam)
    lower = upper - math.log1p(pair.sigma2 / pair.sigma1)
    return EntropyBounds(lower, upper)


def log_density_gap(pair: ScalarMixturePair, y: float) -> float:
    """``ln N1(y) - ln N2(y)``; zero at ``y = +-lambda``."""
    s1, s2 = pair.sigma1, pair.sigma2
    return math.log(s2 / s1) - 0.5 * y * y * (1.0 / s1**2 - 1.0 / s2**2)


__all__ = [
    "EntropyBounds",
    "ScalarMixturePair",
    "entropy_bounds_1d",
    "intersection_lambda",
    "log_density_gap",
]
