"""Rényi maximum-entropy densities, their information functionals and diffusion checks."""
from .errors import (
    AlphaRangeError,
    BracketError,
    DomainError,
    EntropyUndefinedError,
    EvaluationError,
    MomentDivergenceError,
    NonIntegrableTailError,
    NotConvergedError,
    RenyiMaxentError,
    TailDominanceError,
)
from .profiles import AlphaRegime, MaxEntProfile, Regime, ZkbProfile, derive_constants
from .functionals import (
    DensityField,
    entropy_power,
    entropy_report,
    fisher_information_alpha,
    g_functional,
    profile_field,
    relative_renyi,
    renyi_entropy,
)
from .diffusion import entropy_power_concavity, pde_residual, threshold_alpha
from .variational import global_max_certificate, numeric_maximize, solve_lagrange
from .report import Check, ConformanceReport

__version__ = "0.1.0"

__all__ = [
    "AlphaRangeError",
    "AlphaRegime",
    "BracketError",
    "Check",
    "ConformanceReport",
    "DensityField",
    "DomainError",
    "EntropyUndefinedError",
    "EvaluationError",
    "MaxEntProfile",
    "MomentDivergenceError",
    "NonIntegrableTailError",
    "NotConvergedError",
    "Regime",
    "RenyiMaxentError",
    "TailDominanceError",
    "ZkbProfile",
    "derive_constants",
    "entropy_power",
    "entropy_power_concavity",
    "entropy_report",
    "fisher_information_alpha",
    "g_functional",
    "global_max_certificate",
    "numeric_maximize",
    "pde_residual",
    "profile_field",
    "relative_renyi",
    "renyi_entropy",
    "solve_lagrange",
    "threshold_alpha",
]
