"""Choose an entropy estimator by name."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exceptions import InputError
from .mixture import GaussianMixture
from .oracles import McSpec, QuadratureSpec, entropy_monte_carlo, entropy_quadrature
from .taylor import (
    DEFAULT_MAX_COMPONENTS,
    EntropyEstimate,
    SplitSchedule,
    entropy_taylor,
    entropy_with_splitting,
)

METHODS = ("taylor", "taylor-split", "quadrature", "monte-carlo")
_ALIASES = {"mc": "monte-carlo", "split": "taylor-split"}


@dataclass(frozen=True)
class EntropyMethod:
    """Estimator configuration.

    Defaults follow the multi-region setting: fourth order, two rounds of
    four-way splits applied to every component.
    """

    name: str = "taylor-split"
    order: int = 4
    schedule: SplitSchedule = field(default_factory=SplitSchedule)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    mc: McSpec = field(default_factory=McSpec)
    max_components: int = DEFAULT_MAX_COMPONENTS
    fourth_moment: str = "full"

    def __post_init__(self):
        name = _ALIASES.get(self.name, self.name)
        if name not in METHODS:
            raise InputError(f"unknown estimator {self.name!r}; choose from {', '.join(METHODS)}")
        object.__setattr__(self, "name", name)

    def to_dict(self) -> dict:
        out = {"method": self.name}
        if self.name in ("taylor", "taylor-split"):
            out["order"] = self.order
            out["fourth_moment"] = self.fourth_moment
        if self.name == "taylor-split":
            out["schedule"] = self.schedule.to_dict()
        if self.name == "monte-carlo":
            out["mc_samples"] = self.mc.samples
            out["seed"] = self.mc.seed
        if self.name == "quadrature":
            out["half_width_sigmas"] = self.quadrature.half_width_sigmas
            out["points_per_dim"] = self.quadrature.points_per_dim
        return out


def estimate_entropy(gmm: GaussianMixture, method: EntropyMethod | None = None) -> EntropyEstimate:
    method = EntropyMethod() if method is None else method
    if method.name == "taylor":
        return entropy_taylor(gmm, method.order, method.fourth_moment)
    if method.name == "taylor-split":
        return entropy_with_splitting(gmm, method.order, method.schedule, method.max_components, method.fourth_moment)
    if method.name == "quadrature":
        return entropy_quadrature(gmm, method.quadrature)
    return entropy_monte_carlo(gmm, method.mc)
