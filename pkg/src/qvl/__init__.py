"""Violation optimization and entanglement diagnostics for 3-qubit pure states."""

from .errors import ConvergenceWarning, DomainError, NormalizationError, NumericalError
from .measures import (
    MeasureSet,
    WoottersResult,
    correlation_invariant,
    measure_set,
    purity_invariants,
    tangles,
    wootters_concurrence,
)
from .operators import (
    MERMIN_COEFFS,
    SettingsVector,
    build_family,
    expectation,
    pauli_observable,
)
from .rmatrix import (
    CubicSpectrum,
    alpha_from_measures,
    correlation_tensor,
    flatten,
    flattening_spectra,
    gamma_r,
    gram_cubic,
    mermin_bound_check,
)
from .state import (
    StateParams,
    density,
    make_state,
    params_from_json,
    partial_trace,
    random_params,
)
from .violation import (
    OptimizerConfig,
    ScanRow,
    ViolationResult,
    format_scan_csv,
    maximize_violation,
    scan,
    single_measure_slice,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceWarning", "DomainError", "NormalizationError", "NumericalError",
    "MeasureSet", "WoottersResult", "correlation_invariant", "measure_set",
    "purity_invariants", "tangles", "wootters_concurrence",
    "MERMIN_COEFFS", "SettingsVector", "build_family", "expectation",
    "pauli_observable",
    "CubicSpectrum", "alpha_from_measures", "correlation_tensor", "flatten",
    "flattening_spectra", "gamma_r", "gram_cubic", "mermin_bound_check",
    "StateParams", "density", "make_state", "params_from_json", "partial_trace",
    "random_params",
    "OptimizerConfig", "ScanRow", "ViolationResult", "format_scan_csv",
    "maximize_violation", "scan", "single_measure_slice",
    "__version__",
]
