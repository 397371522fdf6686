"""Python access to the spinmetric C++ core."""

from ._core import (
    DomainError,
    ExtractionInvalid,
    InsufficientData,
    InvalidCutoff,
    NumericalError,
    ShapeError,
    __version__,
    annihilation_matrix,
    bogoliubov_params,
    coupling_strength,
    fermi_point_residual,
    hamiltonian_matrix,
    low_energy_coefficients,
    observable_trace,
    resonant_momentum,
    run_sweep,
    spectrum_spacing,
    symmetry_check,
)

__all__ = [
    "DomainError",
    "ExtractionInvalid",
    "InsufficientData",
    "InvalidCutoff",
    "NumericalError",
    "ShapeError",
    "__version__",
    "annihilation_matrix",
    "bogoliubov_params",
    "coupling_strength",
    "fermi_point_residual",
    "hamiltonian_matrix",
    "low_energy_coefficients",
    "observable_trace",
    "resonant_momentum",
    "run_sweep",
    "spectrum_spacing",
    "symmetry_check",
]
