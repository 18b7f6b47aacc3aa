"""Python bindings for the polwire simulation core."""

from ._core import (
    ConfigError,
    DomainError,
    Error,
    HBAR_EV_FS,
    IntegrityError,
    NumericalError,
    ResourceError,
    UndefinedObservableError,
    __version__,
    config_hash,
    derive_seed,
    hopfield_molecular_fraction,
    mode_energy,
    mode_set,
    preset_names,
    run,
    sample_realization,
    simulate,
    transverse_wavevector,
    truncation_error,
    wavevector_at_energy,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "HBAR_EV_FS",
    "IntegrityError",
    "NumericalError",
    "ResourceError",
    "UndefinedObservableError",
    "__version__",
    "config_hash",
    "derive_seed",
    "hopfield_molecular_fraction",
    "mode_energy",
    "mode_set",
    "preset_names",
    "run",
    "sample_realization",
    "simulate",
    "transverse_wavevector",
    "truncation_error",
    "wavevector_at_energy",
]
