"""Spectral dimension calculator for special Lagrangian conifold moduli."""

from ._core import (
    __version__,
    check_config,
    exceptional_weights,
    expected_stable_multiplicities,
    lagrangian_slice_dim,
    mesh_spectrum,
    obstruction_dim_stable,
    roots_for_eigenvalue,
    run_scenario,
    slice_dim,
    sphere_spectrum,
    stability_check,
    torus_spectrum,
    verify_report,
)

__all__ = [
    "__version__",
    "check_config",
    "exceptional_weights",
    "expected_stable_multiplicities",
    "lagrangian_slice_dim",
    "mesh_spectrum",
    "obstruction_dim_stable",
    "roots_for_eigenvalue",
    "run_scenario",
    "slice_dim",
    "sphere_spectrum",
    "stability_check",
    "torus_spectrum",
    "verify_report",
]
