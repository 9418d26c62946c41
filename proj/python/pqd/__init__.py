"""Plasmon-coupled quantum-dot toolkit."""

from ._pqd import (
    Error,
    __version__,
    convert_units,
    decay_trace,
    detect_jumps,
    drude_epsilon,
    markov_fano,
    noise_spectrum,
    offset_grid,
    onset_exponent,
    phonon_branches,
    phonon_cutoffs,
    retarded_noise,
    se_rate_profile,
    symmetric_grid,
    trace_modes,
)

__all__ = [
    "Error",
    "__version__",
    "convert_units",
    "decay_trace",
    "detect_jumps",
    "drude_epsilon",
    "markov_fano",
    "noise_spectrum",
    "offset_grid",
    "onset_exponent",
    "phonon_branches",
    "phonon_cutoffs",
    "retarded_noise",
    "se_rate_profile",
    "symmetric_grid",
    "trace_modes",
]
