"""Entropy of Gaussian mixtures and mutual information of binary-input ERP channels."""

from .bootstrap import BootstrapResult, BootstrapSpec, bootstrap_t_ci, median
from .bounds import EntropyBounds, ScalarMixturePair, entropy_bounds_1d, intersection_lambda
from .datagen import SynthConfig, synth_dataset
from .entropy import EntropyMethod, estimate_entropy
from .erp import (
    Block,
    ClassConditionals,
    ErpDataset,
    MiReport,
    RoiMap,
    Trial,
    conditional_entropy_bits,
    estimate_class_conditionals,
    mi_report,
    mutual_information,
    mutual_information_bits,
    output_entropy_bits,
    per_trial_mi,
    reduce_to_rois,
)
from .estimators import ErpChannelMI, RoiAverager
from .mixture import (
    GaussianComponent,
    GaussianMixture,
    LogDensityDerivatives,
    gaussian_log_pdf,
    log_density_derivatives,
    mixture_pdf,
)
from .oracles import McSpec, QuadratureSpec, entropy_monte_carlo, entropy_quadrature
from .taylor import (
    SPLIT_LIBRARY,
    EntropyEstimate,
    SplitSchedule,
    entropy_taylor,
    entropy_with_splitting,
    select_split_target,
    split_component,
)

__version__ = "0.1.0"

__all__ = [
    "SPLIT_LIBRARY",
    "Block",
    "bootstrap_t_ci",
    "BootstrapResult",
    "BootstrapSpec",
    "ClassConditionals",
    "conditional_entropy_bits",
    "entropy_bounds_1d",
    "entropy_monte_carlo",
    "entropy_quadrature",
    "entropy_taylor",
    "entropy_with_splitting",
    "EntropyBounds",
    "EntropyEstimate",
    "EntropyMethod",
    "ErpChannelMI",
    "ErpDataset",
    "estimate_class_conditionals",
    "estimate_entropy",
    "gaussian_log_pdf",
    "GaussianComponent",
    "GaussianMixture",
    "intersection_lambda",
    "log_density_derivatives",
    "LogDensityDerivatives",
    "McSpec",
    "median",
    "mi_report",
    "MiReport",
    "mixture_pdf",
    "mutual_information",
    "mutual_information_bits",
    "output_entropy_bits",
    "per_trial_mi",
    "QuadratureSpec",
    "reduce_to_rois",
    "RoiAverager",
    "RoiMap",
    "ScalarMixturePair",
    "select_split_target",
    "split_component",
    "SplitSchedule",
    "synth_dataset",
    "SynthConfig",
    "Trial",
]
