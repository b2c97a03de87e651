"""Python bindings for the pdhs library."""

from ._core import (
    Error,
    Grid,
    band_range,
    bernstein_check,
    besov_norm,
    choose_corrector_constants,
    d_central,
    decay_slope,
    dft,
    euler_system,
    idft,
    kalman_matrix,
    kalman_rank_holds,
    l2_norm,
    localize,
    relaxation_errors,
    sobolev_norm,
    spectral_propagate,
    stability_report,
    validate_system,
    window_grid,
)

__all__ = [
    "Error",
    "Grid",
    "band_range",
    "bernstein_check",
    "besov_norm",
    "choose_corrector_constants",
    "d_central",
    "decay_slope",
    "dft",
    "euler_system",
    "idft",
    "kalman_matrix",
    "kalman_rank_holds",
    "l2_norm",
    "localize",
    "relaxation_errors",
    "sobolev_norm",
    "spectral_propagate",
    "stability_report",
    "validate_system",
    "window_grid",
]
