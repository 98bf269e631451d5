"""Taylor-expansion entropy of a Gaussian mixture, with variance splitting.

The entropy ``-E[ln p]`` is expanded around every component mean,

    h ~ h0 + h2 + h4,
    h0 = -sum_i w_i ln p(mu_i)
    h2 = -1/2  sum_i w_i  <H_i, C_i>
    h4 = -1/24 sum_i w_i  E_i[ F_i (z - mu_i)^4 ]

with ``H_i``, ``F_i`` the second and fourth derivatives of ``ln p`` (the full
mixture) at ``mu_i`` and ``<., .>`` the Frobenius product. Odd terms vanish
because odd central moments of a Gaussian are zero.

Wide components are poorly served by a truncated expansion, so they can be
replaced by a precomputed sub-mixture along their principal axis
(:func:`split_component`), after which the expansion is applied to the
refined mixture.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Literal

import numpy as np

from ._validation import check_order, check_ways
from .exceptions import InputError, NumericError, ResourceError
from .mixture import GaussianComponent, GaussianMixture, frobenius, log_density_derivatives

DEFAULT_MAX_COMPONENTS = 256


@dataclass(frozen=True)
class SplitLibraryEntry:
    k: int
    weight: float
    sigma: float
    mean: float


# Splitting library of the standard normal density, verbatim.
SPLIT_LIBRARY: dict[int, tuple[SplitLibraryEntry, ...]] = {
    2: (
        SplitLibraryEntry(1, 0.5000, 0.7745125, -0.56520),
        SplitLibraryEntry(2, 0.5000, 0.7745125, 0.56520),
    ),
    4: (
        SplitLibraryEntry(1, 0.127380, 0.5175126, -1.41312),
        SplitLibraryEntry(2, 0.372619, 0.5175126, -0.44973),
        SplitLibraryEntry(3, 0.372619, 0.5175126, 0.44973),
        SplitLibraryEntry(4, 0.127380, 0.5175126, 1.41312),
    ),
}


def load_split_library_fixture() -> dict[int, tuple[SplitLibraryEntry, ...]]:
    """Read the packaged JSON copy of the splitting library."""
    raw = json.loads(resources.files("erpinfo").joinpath("data/split_library.json").read_text())
    return {
        int(ways): tuple(SplitLibraryEntry(e["k"], e["weight"], e["sigma"], e["mean"]) for e in entries)
        for ways, entries in raw["libraries"].items()
    }


class TargetRule(str, Enum):
    LARGEST_EIGENVALUE = "largest-eigenvalue"
    ALL_COMPONENTS = "all-components"


@dataclass(frozen=True)
class SplitSchedule:
    """How many split rounds to apply and to which components."""

    ways: int = 4
    rounds: int = 2
    target_rule: TargetRule = TargetRule.ALL_COMPONENTS

    def __post_init__(self):
        check_ways(self.ways)
        if int(self.rounds) != self.rounds or self.rounds < 0:
            raise InputError(f"rounds must be a nonnegative integer, got {self.rounds!r}")
        try:
            rule = TargetRule(self.target_rule)
        except ValueError as exc:
            raise InputError(f"unknown target rule {self.target_rule!r}") from exc
        object.__setattr__(self, "rounds", int(self.rounds))
        object.__setattr__(self, "target_rule", rule)

    def to_dict(self) -> dict:
        return {"ways": self.ways, "rounds": self.rounds, "target_rule": self.target_rule.value}


@dataclass(frozen=True)
class EntropyEstimate:
    """An entropy value in nats together with how it was obtained."""

    nats: float
    method: str
    order: int | None = None
    schedule: SplitSchedule | None = None
    stderr: float | None = None
    n_components: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.nats):
            raise NumericError(f"non-finite entropy estimate from {self.method}")

    @property
    def bits(self) -> float:
        return self.nats / math.log(2.0)

    @property
    def stderr_bits(self) -> float | None:
        return None if self.stderr is None else self.stderr / math.log(2.0)

    def to_dict(self) -> dict:
        return {
            "entropy_nats": self.nats,
            "entropy_bits": self.bits,
            "method": self.method,
            "order": self.order,
            "schedule": None if self.schedule is None else self.schedule.to_dict(),
            "stderr_nats": self.stderr,
            "n_components": self.n_components,
        }


FourthMoment = Literal["full", "kronecker"]


def _fourth_moment_contraction(fourth: np.ndarray, cov: np.ndarray, mode: FourthMoment) -> float:
    """``E[F (z - mu)^4]`` for ``z ~ N(mu, cov)``.

    ``full`` sums all three Gaussian pairings (Isserlis), which reduces to
    ``3 <F, kron(C, C)>`` for a fully symmetric ``F``. ``kronecker`` keeps the
    single pairing ``<F, kron(C, C^T)>``.
    """
    single = frobenius(fourth, np.kron(cov, cov.T))
    if mode == "kronecker":
        return single
    if mode != "full":
        raise InputError(f"unknown fourth-moment mode {mode!r}")
    n = cov.shape[0]
    f = fourth.reshape(n, n, n, n)
    return single + float(np.einsum("abcd,ab,cd->", f, cov, cov) + np.einsum("abcd,ad,bc->", f, cov, cov))


def taylor_terms(gmm: GaussianMixture, order: int = 4, fourth_moment: FourthMoment = "full") -> tuple[float, float, float]:
    """The expansion terms ``(h0, h2, h4)`` in nats; unused orders are 0."""
    order = check_order(order)
    h0 = h2 = h4 = 0.0
    for comp in gmm.components:
        d = log_density_derivatives(comp.mean, gmm, order)
        h0 -= comp.weight * d.value
        if order >= 2:
            h2 -= 0.5 * comp.weight * frobenius(d.hessian, comp.cov)
        if order >= 4:
            h4 -= comp.weight * _fourth_moment_contraction(d.fourth, comp.cov, fourth_moment) / 24.0
    return h0, h2, h4


def entropy_taylor(gmm: GaussianMixture, order: int = 4, fourth_moment: FourthMoment = "full") -> EntropyEstimate:
    """Taylor-expansion entropy estimate ``h0 (+h2) (+h4)`` in nats.

    Exact at order 2 for a single Gaussian, since ``ln p`` is then quadratic.
    """
    h0, h2, h4 = taylor_terms(gmm, order, fourth_moment)
    return EntropyEstimate(h0 + h2 + h4, "taylor", order=order, n_components=len(gmm))


def principal_axis(cov: np.ndarray, tol: float = 1e-12) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and its unit eigenvector.

    Among eigenvalues tied within ``tol`` (relative) the lowest eigenvector
    index in ``eigh`` order wins; the vector's first nonzero entry is made
    positive.
    """
    lam, vecs = np.linalg.eigh(cov)
    top = lam[-1]
    d = int(np.flatnonzero(lam >= top - tol * abs(top))[0])
    v = vecs[:, d]
    nz = np.flatnonzero(np.abs(v) > tol)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return float(lam[d]), v


def select_split_target(gmm: GaussianMixture) -> int:
    """Index of the component with the largest maximum eigenvalue (first on ties)."""
    tops = np.array([np.linalg.eigvalsh(c.cov)[-1] for c in gmm.components])
    return int(np.argmax(tops))


def _split(comp: GaussianComponent, ways: int) -> list[GaussianComponent]:
    library = SPLIT_LIBRARY[check_ways(ways)]
    # library weights sum to 1 only within 1e-5; renormalize so the mixture stays exact
    total = math.fsum(e.weight for e in library)
    lam, v = principal_axis(comp.cov)
    std = math.sqrt(lam)
    # replace the variance along v: C - lam v v^T + (sigma^2 lam) v v^T
    vv = np.outer(v, v)
    out = []
    for e in library:
        cov = comp.cov + (e.sigma**2 - 1.0) * lam * vv
        out.append(GaussianComponent(comp.weight * e.weight / total, comp.mean + std * e.mean * v, cov))
    return out


def split_component(gmm: GaussianMixture, index: int, ways: int = 4) -> GaussianMixture:
    """Replace component ``index`` by ``ways`` narrower components along its principal axis."""
    if not 0 <= index < len(gmm):
        raise InputError(f"component index {index} out of range for {len(gmm)} components")
    comps = list(gmm.components)
    comps[index : index + 1] = _split(comps[index], ways)
    return GaussianMixture(_renormalized(comps))


def _renormalized(comps: list[GaussianComponent]) -> tuple[GaussianComponent, ...]:
    total = math.fsum(c.weight for c in comps)
    if abs(total - 1.0) <= 1e-15:
        return tuple(comps)
    return tuple(GaussianComponent(c.weight / total, c.mean, c.cov) for c in comps)


def refine_mixture(
    gmm: GaussianMixture, schedule: SplitSchedule, max_components: int = DEFAULT_MAX_COMPONENTS
) -> GaussianMixture:
    """Apply ``schedule.rounds`` split rounds."""
    for _ in range(schedule.rounds):
        if schedule.target_rule is TargetRule.ALL_COMPONENTS:
            size = len(gmm) * schedule.ways
            if size > max_components:
                raise ResourceError(f"split would create {size} components (cap {max_components})")
            comps = [sub for c in gmm.components for sub in _split(c, schedule.ways)]
            gmm = GaussianMixture(_renormalized(comps))
        else:
            size = len(gmm) + schedule.ways - 1
            if size > max_components:
                raise ResourceError(f"split would create {size} components (cap {max_components})")
            gmm = split_component(gmm, select_split_target(gmm), schedule.ways)
    return gmm


def entropy_with_splitting(
    gmm: GaussianMixture,
    order: int = 4,
    schedule: SplitSchedule | None = None,
    max_components: int = DEFAULT_MAX_COMPONENTS,
    fourth_moment: FourthMoment = "full",
) -> EntropyEstimate:
    """Taylor estimate of ``gmm``'s entropy computed on a split-refined copy."""
    schedule = SplitSchedule() if schedule is None else schedule
    refined = refine_mixture(gmm, schedule, max_components)
    est = entropy_taylor(refined, order, fourth_moment)
    return EntropyEstimate(est.nats, "taylor-split", order=est.order, schedule=schedule, n_components=len(refined))
