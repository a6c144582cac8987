"""Exact N-soliton solutions of the mixed (focusing-defocusing) coupled NLS
system, built from discrete spectral data, plus the independent verification
oracles (PDE residual, Lax compatibility, direct scattering, split-step)."""

from ._core import (
    SolitonlabError,
    SpectralDatum,
    __version__,
    component_masses,
    eval_fields,
    eval_grid,
    find_eigenvalue,
    one_soliton,
    pde_residual,
    r11,
    run_scenario,
    scattering_matrix,
    simulate,
    theta,
    zero_curvature_residual,
)

__all__ = [
    "SolitonlabError",
    "SpectralDatum",
    "__version__",
    "component_masses",
    "eval_fields",
    "eval_grid",
    "find_eigenvalue",
    "one_soliton",
    "pde_residual",
    "r11",
    "run_scenario",
    "scattering_matrix",
    "simulate",
    "theta",
    "zero_curvature_residual",
]
