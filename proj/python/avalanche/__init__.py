"""Avalanche principle verification for chains of matrices.

Chains are passed as lists of square numpy arrays (or ``Chain`` objects).
Reports expose raw quantities next to their bounds, so a failing verdict can
be inspected rather than just observed.
"""

from ._core import (
    AlmostInvarianceReport,
    ApConstants,
    APHypotheses,
    APReport,
    AvalancheError,
    Chain,
    ComplexAPReport,
    Conclusion,
    ConfigError,
    DomainError,
    ForgeError,
    GapError,
    HypothesisError,
    PerturbationReport,
    ShapeError,
    SvpResult,
    almost_invariance,
    alpha_maps,
    beta_maps,
    check_hypotheses,
    exterior_power,
    forge_chain,
    perturb_chain,
    perturbation_compare,
    proj_metrics,
    realify,
    relative_distance,
    run_ap,
    run_complex_ap,
    run_experiment,
    run_flag_ap,
    sigma_tau,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
