"""Density-ratio estimation via kernel-regularized least squares.

Thin Python surface over the C++ core: kernels, the two fit paths (full and
Nystrom-subsampled), capacity/effective-dimension diagnostics, parameter
selection rules, and the synthetic benchmark pairs.
"""

from ._rnd import (  # noqa: F401
    AlphaChoice,
    ErrorReport,
    FitCost,
    FitMode,
    IndexFunctions,
    KernelFamily,
    KernelSpec,
    NystromPlan,
    RateMetric,
    RatioModel,
    Regime,
    SampleLabel,
    SelectionPolicy,
    SyntheticPair,
    alpha_star,
    capacity_diag,
    capacity_sup,
    choose_alpha,
    choose_subsample_size,
    cross_gram,
    draw,
    effective_dimension,
    embedded_error,
    eval_kernel,
    evaluate,
    fit_full,
    fit_nystrom,
    gram,
    l2p_error,
    load_model,
    model_from_json,
    model_to_json,
    rkhs_distance,
    save_model,
    subsample_plan,
    theory_rate_exponent,
    theta,
    theta_bar,
    theta_bar_inverse,
    theta_inverse,
    true_ratio,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
