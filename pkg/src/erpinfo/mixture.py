"""Gaussian mixture types, densities and log-density derivative tensors.

Derivatives are those of ``f(z) = ln p(z)`` for the *full* mixture
``p(z) = sum_j w_j N(z; mu_j, C_j)``. They are assembled from the
responsibility-weighted raw derivatives of the component densities,
``Q_k = (d^k p) / p``, followed by the moment-to-cumulant map (the
multivariate Faa di Bruno formula for the logarithm). Working with ratios to
``p`` keeps everything finite far out in the tails.

Tensor layout: the third derivative is stored as an ``n^2 x n`` matrix with
row ``a*n + b`` and column ``c``; the fourth as an ``n^2 x n^2`` matrix with
row ``a*n + b`` and column ``c*n + d``. This is the row-major Kronecker
layout, so ``F * kron(A, B)`` summed gives ``sum F_abcd A_ac B_bd``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.special import logsumexp

from ._validation import as_spd_matrix, as_vector, check_order
from .exceptions import InputError

WEIGHT_SUM_TOL = 1e-12
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class GaussianComponent:
    """One weighted multivariate normal component."""

    weight: float
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        w = float(self.weight)
        if not (0.0 < w <= 1.0 + WEIGHT_SUM_TOL):
            raise InputError(f"component weight must lie in (0, 1], got {w}")
        cov = as_spd_matrix(self.cov)
        mean = as_vector(self.mean, "mean", cov.shape[0])
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @cached_property
    def chol(self) -> np.ndarray:
        """Lower Cholesky factor of the covariance."""
        return cholesky(self.cov, lower=True)

    @cached_property
    def log_det(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self.chol))))

    @cached_property
    def precision(self) -> np.ndarray:
        p = cho_solve((self.chol, True), np.eye(self.dim))
        return 0.5 * (p + p.T)

    def entropy(self) -> float:
        """Closed-form differential entropy in nats."""
        return 0.5 * (self.dim * (1.0 + _LOG_2PI) + self.log_det)

    def __repr__(self):
        return f"GaussianComponent(weight={self.weight!r}, mean={self.mean.tolist()!r}, cov={self.cov.tolist()!r})"


@dataclass(frozen=True, eq=False)
class GaussianMixture:
    """Ordered, immutable list of components whose weights sum to one."""

    components: tuple[GaussianComponent, ...]
    dim: int = field(init=False)

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InputError("a mixture needs at least one component")
        if not all(isinstance(c, GaussianComponent) for c in comps):
            raise InputError("components must be GaussianComponent instances")
        dims = {c.dim for c in comps}
        if len(dims) != 1:
            raise InputError(f"components disagree on dimension: {sorted(dims)}")
        total = math.fsum(c.weight for c in comps)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InputError(f"component weights sum to {total!r}, expected 1")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "dim", dims.pop())

    @classmethod
    def from_arrays(cls, weights, means, covs) -> "GaussianMixture":
        return cls(tuple(GaussianComponent(w, m, c) for w, m, c in zip(weights, means, covs, strict=True)))

    @classmethod
    def single(cls, mean, cov) -> "GaussianMixture":
        return cls((GaussianComponent(1.0, mean, cov),))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __repr__(self):
        return f"GaussianMixture(dim={self.dim}, n_components={len(self)})"

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])

    @cached_property
    def means(self) -> np.ndarray:
        return np.stack([c.mean for c in self.components])

    @cached_property
    def covs(self) -> np.ndarray:
        return np.stack([c.cov for c in self.components])

    @cached_property
    def precisions(self) -> np.ndarray:
        return np.stack([c.precision for c in self.components])

    @cached_property
    def _log_norms(self) -> np.ndarray:
        # log w_j - 0.5 (n ln 2pi + ln|C_j|)
        return np.array(
            [math.log(c.weight) - 0.5 * (self.dim * _LOG_2PI + c.log_det) for c in self.components]
        )

    def component_log_terms(self, x) -> np.ndarray:
        """``log(w_j N(x; mu_j, C_j))`` for a batch of points, shape ``(m, L)``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[-1] != self.dim:
            raise InputError(f"points have dimension {x.shape[-1]}, mixture has {self.dim}")
        out = np.empty((x.shape[0], len(self)))
        for j, c in enumerate(self.components):
            z = solve_triangular(c.chol, (x - c.mean).T, lower=True)
            out[:, j] = self._log_norms[j] - 0.5 * np.sum(z * z, axis=0)
        return out

    def logpdf(self, x) -> np.ndarray:
        """Vectorized ``ln p(x)`` over the rows of ``x``."""
        return logsumexp(self.component_log_terms(x), axis=1)

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def mean(self) -> np.ndarray:
        return self.weights @ self.means

    def max_std(self) -> float:
        """Largest standard deviation along any principal axis of any component."""
        return float(np.sqrt(max(np.linalg.eigvalsh(c.cov)[-1] for c in self.components)))

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``size`` points: component by weight, then ``mu + L z``."""
        labels = rng.choice(len(self), size=size, p=self.weights / self.weights.sum())
        z = rng.standard_normal((size, self.dim))
        out = np.empty((size, self.dim))
        for j, c in enumerate(self.components):
            sel = labels == j
            out[sel] = c.mean + z[sel] @ c.chol.T
        return out

    def to_dict(self) -> dict:
        return {
            "components": [
                {"weight": c.weight, "mean": c.mean.tolist(), "cov": c.cov.tolist()} for c in self.components
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianMixture":
        try:
            comps = data["components"]
            return cls(tuple(GaussianComponent(c["weight"], c["mean"], c["cov"]) for c in comps))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed mixture description: {exc}") from exc


def load_mixture(path) -> GaussianMixture:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return GaussianMixture.from_dict(data)


def save_mixture(gmm: GaussianMixture, path) -> None:
    Path(path).write_text(json.dumps(gmm.to_dict(), indent=2))


def gaussian_log_pdf(x, comp: GaussianComponent) -> float:
    """Log density of a single (unweighted) normal component at ``x``."""
    x = as_vector(x, "x", comp.dim)
    z = solve_triangular(comp.chol, x - comp.mean, lower=True)
    return -0.5 * (comp.dim * _LOG_2PI + comp.log_det + float(z @ z))


def mixture_pdf(x, gmm: GaussianMixture) -> float:
    x = as_vector(x, "x", gmm.dim)
    return float(np.exp(gmm.logpdf(x[None, :])[0]))


@dataclass(frozen=True, eq=False)
class LogDensityDerivatives:
    """Value and derivative tensors of ``ln p`` at one point.

    Entries above the requested order are ``None``.
    """

    value: float
    gradient: np.ndarray | None = None
    hessian: np.ndarray | None = None
    third: np.ndarray | None = None
    fourth: np.ndarray | None = None

    @property
    def order(self) -> int:
        return 4 if self.fourth is not None else 2 if self.hessian is not None else 0

    def third_tensor(self) -> np.ndarray:
        n = self.gradient.shape[0]
        return self.third.reshape(n, n, n)

    def fourth_tensor(self) -> np.ndarray:
        n = self.gradient.shape[0]
        return self.fourth.reshape(n, n, n, n)


def _sym_pairs(m: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sum over the 6 ways to place matrix ``m`` and vectors ``a``, ``b`` on 4 indices.

    Only valid when ``a`` and ``b`` are the same vector (used that way below).
    """
    e = np.einsum
    return (
        e("ab,c,d->abcd", m, a, b)
        + e("ac,b,d->abcd", m, a, b)
        + e("ad,b,c->abcd", m, a, b)
        + e("bc,a,d->abcd", m, a, b)
        + e("bd,a,c->abcd", m, a, b)
        + e("cd,a,b->abcd", m, a, b)
    )


def log_density_derivatives(x, gmm: GaussianMixture, order: int = 4) -> LogDensityDerivatives:
    """Derivatives of ``ln p`` at ``x`` up to ``order`` (0, 2 or 4).

    The gradient is always filled for orders 2 and 4; the third tensor only
    for order 4.
    """
    order = check_order(order)
    x = as_vector(x, "x", gmm.dim)
    log_terms = gmm.component_log_terms(x[None, :])[0]
    value = float(logsumexp(log_terms))
    if order == 0:
        return LogDensityDerivatives(value)

    n = gmm.dim
    e = np.einsum
    resp = np.exp(log_terms - value)
    # u_j = C_j^{-1} (x - mu_j); d p_j / p_j = -u_j
    u = e("jab,jb->ja", gmm.precisions, x - gmm.means)
    P = gmm.precisions

    q1 = -resp @ u
    q2 = e("j,ja,jb->ab", resp, u, u) - e("j,jab->ab", resp, P)
    grad = q1
    hess = q2 - np.outer(q1, q1)
    hess = 0.5 * (hess + hess.T)
    if order == 2:
        return LogDensityDerivatives(value, grad, hess)

    q3 = np.zeros((n, n, n))
    q4 = np.zeros((n, n, n, n))
    for r, uj, Pj in zip(resp, u, P):
        if r == 0.0:
            continue
        q3 += r * (
            -e("a,b,c->abc", uj, uj, uj)
            + e("ab,c->abc", Pj, uj)
            + e("ac,b->abc", Pj, uj)
            + e("bc,a->abc", Pj, uj)
        )
        q4 += r * (
            e("a,b,c,d->abcd", uj, uj, uj, uj)
            - _sym_pairs(Pj, uj, uj)
            + e("ab,cd->abcd", Pj, Pj)
            + e("ac,bd->abcd", Pj, Pj)
            + e("ad,bc->abcd", Pj, Pj)
        )

    t3 = (
        q3
        - e("ab,c->abc", q2, q1)
        - e("ac,b->abc", q2, q1)
        - e("bc,a->abc", q2, q1)
        + 2.0 * e("a,b,c->abc", q1, q1, q1)
    )
    t4 = (
        q4
        - e("abc,d->abcd", q3, q1)
        - e("abd,c->abcd", q3, q1)
        - e("acd,b->abcd", q3, q1)
        - e("bcd,a->abcd", q3, q1)
        - e("ab,cd->abcd", q2, q2)
        - e("ac,bd->abcd", q2, q2)
        - e("ad,bc->abcd", q2, q2)
        + 2.0 * _sym_pairs(q2, q1, q1)
        - 6.0 * e("a,b,c,d->abcd", q1, q1, q1, q1)
    )
    return LogDensityDerivatives(value, grad, hess, t3.reshape(n * n, n), t4.reshape(n * n, n * n))


def frobenius(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius product: sum of the elementwise product."""
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def equal_weight_pair(cov1, cov2, mean1: Sequence[float] | None = None, mean2: Sequence[float] | None = None):
    """The two-class output mixture ``0.5 N(mean1, cov1) + 0.5 N(mean2, cov2)``."""
    cov1 = as_spd_matrix(cov1, "cov1")
    cov2 = as_spd_matrix(cov2, "cov2")
    n = cov1.shape[0]
    m1 = np.zeros(n) if mean1 is None else mean1
    m2 = np.zeros(n) if mean2 is None else mean2
    return GaussianMixture((GaussianComponent(0.5, m1, cov1), GaussianComponent(0.5, m2, cov2)))
