"""Spontaneous emission in a finite box: decay, line shape and field entropy.

Units: hbar = c = eps0 = 1 with the transition frequency omega0 as the scale.
Line widths are half widths at half maximum.
"""
from __future__ import annotations

__version__ = "0.1.0"

from . import _backend
from .classical import (
    ClassicalTrajectory,
    classical_field_entropy,
    classical_spectrum,
    damped_trajectory,
    larmor_power,
    radiative_force,
)
from .dynamics import (
    AmplitudeState,
    Evolution,
    asymptotic_amplitudes,
    evolve,
    evolve_oracle,
    recurrence_scan,
    time_reversal_error,
)
from .entropy import (
    EntropyReport,
    diagonal_entropy,
    emission_entropy,
    entropy_multi_atom,
    entropy_time_series,
    entropy_timescale,
)
from .modes import Mode, ModeSet, enumerate_1d, enumerate_3d, shell_entropy_3d
from .params import (
    PhysicalParams,
    effective_solid_angle,
    gamma_ww,
    phase_space_time,
    tau_classical,
    v0_3d,
    wavepacket_volume,
)
from .spectra import (
    DecayFit,
    LorentzFit,
    SpectralDistribution,
    bin_spectrum,
    fit_exponential,
    fit_lorentzian,
)

backend = _backend.name

__all__ = [
    "AmplitudeState",
    "ClassicalTrajectory",
    "DecayFit",
    "EntropyReport",
    "Evolution",
    "LorentzFit",
    "Mode",
    "ModeSet",
    "PhysicalParams",
    "SpectralDistribution",
    "asymptotic_amplitudes",
    "backend",
    "bin_spectrum",
    "classical_field_entropy",
    "classical_spectrum",
    "damped_trajectory",
    "diagonal_entropy",
    "effective_solid_angle",
    "emission_entropy",
    "entropy_multi_atom",
    "entropy_time_series",
    "entropy_timescale",
    "enumerate_1d",
    "enumerate_3d",
    "evolve",
    "evolve_oracle",
    "fit_exponential",
    "fit_lorentzian",
    "gamma_ww",
    "larmor_power",
    "phase_space_time",
    "radiative_force",
    "recurrence_scan",
    "shell_entropy_3d",
    "tau_classical",
    "time_reversal_error",
    "v0_3d",
    "wavepacket_volume",
]
