"""Residual-based weighted and smoothed von Mises prediction for autoregressive series."""

from ._core import (
    AsymptoticReport,
    ELWeights,
    InnovationDist,
    KernelConfig,
    ModelSpec,
    ResidualSet,
    TimeSeries,
    __version__,
    conditional_quantile,
    default_theta_grid,
    default_x_grid,
    efficiency_surface,
    fit,
    fit_ar1_coefficient,
    kde,
    lag1_cdf_variances,
    lag2_cdf_variances,
    mc_run,
    predict,
    regression_gradient,
    regression_value,
    residuals,
    simulate_series,
    smoothed_cdf,
    solve_el_weights,
    true_value,
    unit_weights,
)

__all__ = [
    "AsymptoticReport",
    "ELWeights",
    "InnovationDist",
    "KernelConfig",
    "ModelSpec",
    "ResidualSet",
    "TimeSeries",
    "__version__",
    "conditional_quantile",
    "default_theta_grid",
    "default_x_grid",
    "efficiency_surface",
    "fit",
    "fit_ar1_coefficient",
    "kde",
    "lag1_cdf_variances",
    "lag2_cdf_variances",
    "mc_run",
    "predict",
    "regression_gradient",
    "regression_value",
    "residuals",
    "simulate_series",
    "smoothed_cdf",
    "solve_el_weights",
    "true_value",
    "unit_weights",
]
