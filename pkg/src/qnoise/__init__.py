"""Covariance-level toolkit for stationary quantum noise.

Models a stationary quantum noise and its time-reversed fundamental
output at second order: flip-symmetric spectra, circulant covariance
realizations, vacuum/thermal decomposition with modular filters, linear
synthesis from standard noise, and table-level quantum stochastic
integration.
"""
from .decomposition import (
    INPUT_TO_OUTPUT,
    OUTPUT_TO_INPUT,
    ComponentSplit,
    ThetaKernels,
    best_estimate,
    modular_kernels_theta,
    split,
)
from .errors import (
    DegenerateRecoveryError,
    EmptySupportError,
    NotInvertibleError,
    NotPositiveDefiniteError,
    NotVacuumError,
)
from .mode_algebra import (
    A,
    A_DAG,
    C,
    C_DAG,
    ModeOperator,
    commutator,
    expectation,
    invert_pair,
    thermal_pair,
)
from .qsi import (
    CanonicalPair,
    IntegratorTable,
    MeasureSymbol,
    OutputPair,
    StationaryFilterKernels,
    VacuumAssembly,
    build_output_pair,
    canonical_from_vacuum,
    integrator_table,
    interval_mask,
    isometry_check,
    recover_canonical,
    reflection_symmetry_check,
    time_domain_representation,
)
from .spectra import (
    MIXED,
    STANDARD_THERMAL,
    STANDARD_VACUUM,
    THERMAL,
    VACUUM,
    WHITE,
    SpectralDensityPair,
    SpectralGrid,
    classify,
    flat_density,
    make_grid,
    planck_density,
    tabulated_density,
)
from .stationary import (
    CorrelationSequence,
    ModularFilter,
    SpectralAmplitudes,
    StationaryModel,
    build_model,
    coefficient_norm,
    correlation_sequence,
    modular_matrix,
    realization_columns,
    spectral_amplitudes,
)
from .synthesis import (
    StandardPair,
    SynthesisResult,
    TimeDomainFilter,
    TransmissionFilter,
    build_standard_pair,
    synthesize,
    time_domain_filter,
    transmission_function,
)

__version__ = "0.1.0"

__all__ = [
    "A",
    "A_DAG",
    "C",
    "C_DAG",
    "CanonicalPair",
    "ComponentSplit",
    "CorrelationSequence",
    "DegenerateRecoveryError",
    "EmptySupportError",
    "INPUT_TO_OUTPUT",
    "IntegratorTable",
    "MIXED",
    "MeasureSymbol",
    "ModeOperator",
    "ModularFilter",
    "NotInvertibleError",
    "NotPositiveDefiniteError",
    "NotVacuumError",
    "OUTPUT_TO_INPUT",
    "OutputPair",
    "STANDARD_THERMAL",
    "STANDARD_VACUUM",
    "SpectralAmplitudes",
    "SpectralDensityPair",
    "SpectralGrid",
    "StandardPair",
    "StationaryFilterKernels",
    "StationaryModel",
    "SynthesisResult",
    "THERMAL",
    "ThetaKernels",
    "TimeDomainFilter",
    "TransmissionFilter",
    "VACUUM",
    "VacuumAssembly",
    "WHITE",
    "best_estimate",
    "build_model",
    "build_output_pair",
    "build_standard_pair",
    "canonical_from_vacuum",
    "classify",
    "coefficient_norm",
    "commutator",
    "correlation_sequence",
    "expectation",
    "flat_density",
    "integrator_table",
    "interval_mask",
    "invert_pair",
    "isometry_check",
    "make_grid",
    "modular_kernels_theta",
    "modular_matrix",
    "planck_density",
    "realization_columns",
    "recover_canonical",
    "reflection_symmetry_check",
    "spectral_amplitudes",
    "split",
    "synthesize",
    "tabulated_density",
    "thermal_pair",
    "time_domain_filter",
    "time_domain_representation",
    "transmission_function",
]
