"""Extreme partial least squares (EPLS) with shrinkage priors."""

from ._core import (
    BadThreshold,
    DegenerateDirection,
    DegenerateSubsample,
    DomainError,
    Error,
    FitResult,
    NonPositiveTail,
    OverShrunk,
    SimConfig,
    __version__,
    bessel_i,
    conjugate_map,
    fit_epls,
    fit_epls_at,
    hill,
    hill_curve,
    kendall_tau_clayton,
    log_bessel_i,
    log_c_p,
    logpdf_ball,
    logpdf_sphere,
    qq_data,
    run_sweep,
    similarity_r,
    simulate_dataset,
    soft_threshold,
    sparse_map,
    tail_corr_x,
    tail_corr_y,
    v_hat,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
