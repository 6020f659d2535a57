"""Microdisk cavity optomechanics: forward models and inverse problems.

The package models a fiber-coupled microdisk whose optical modes couple to a
GHz radial breathing mode: steady-state transmission (with thermo-optic
bistability), radiation-pressure backaction, self-oscillation thresholds,
photodetected mechanical noise spectra, and the inverse problems that extract
device parameters from such data.
"""

from diskmech.backaction import (
    OperatingPoint,
    OptomechanicalCoupling,
    backaction_sweep,
    cooperativity,
    damping_shift,
    frequency_shift,
    intrinsic_q_for_threshold,
    is_self_oscillating,
    optical_spring_zero,
    threshold_power,
)
from diskmech.cavity import (
    OpticalMode,
    SweepTrace,
    dropped_power,
    intracavity_photons,
    intracavity_photons_from_field,
    transmission,
)
from diskmech.config import DeviceConfig, load_device_config, save_device_config
from diskmech.errors import NonConvergenceError
from diskmech.fitting import (
    FitResult,
    fit_alpha,
    fit_bistable_lineshape,
    fit_g0,
    fit_lorentzian_psd,
)
from diskmech.mechanics import (
    MechanicalMode,
    coherence_ratio,
    combine_quality_factors,
    qf_product,
    thermal_amplitude,
    thermal_occupancy,
    zero_point_motion,
)
from diskmech.spectra import (
    DisplacementPSD,
    SpectrumTrace,
    calibrate_amplitude,
    displacement_psd_model,
    langevin_oracle,
    lorentzian_sxx,
    normalize_sp,
    synthesize_sp,
    transduction_gain,
)
from diskmech.spin import SpinSusceptibility, driven_coupling, single_phonon_coupling
from diskmech.thermal import (
    ThermalModel,
    bistable_sweep,
    equilibrium_temperature,
    extract_detuning,
    shifted_wavelength,
    temperature_from_shift,
    thermal_pull,
)

__all__ = [
    "DeviceConfig",
    "DisplacementPSD",
    "FitResult",
    "MechanicalMode",
    "NonConvergenceError",
    "OperatingPoint",
    "OpticalMode",
    "OptomechanicalCoupling",
    "SpectrumTrace",
    "SpinSusceptibility",
    "SweepTrace",
    "ThermalModel",
    "backaction_sweep",
    "bistable_sweep",
    "calibrate_amplitude",
    "coherence_ratio",
    "combine_quality_factors",
    "cooperativity",
    "damping_shift",
    "displacement_psd_model",
    "driven_coupling",
    "dropped_power",
    "equilibrium_temperature",
    "extract_detuning",
    "fit_alpha",
    "fit_bistable_lineshape",
    "fit_g0",
    "fit_lorentzian_psd",
    "frequency_shift",
    "intracavity_photons",
    "intracavity_photons_from_field",
    "intrinsic_q_for_threshold",
    "is_self_oscillating",
    "langevin_oracle",
    "load_device_config",
    "lorentzian_sxx",
    "normalize_sp",
    "optical_spring_zero",
    "qf_product",
    "save_device_config",
    "shifted_wavelength",
    "single_phonon_coupling",
    "synthesize_sp",
    "temperature_from_shift",
    "thermal_amplitude",
    "thermal_occupancy",
    "thermal_pull",
    "threshold_power",
    "transduction_gain",
    "transmission",
    "zero_point_motion",
]

__version__ = "0.1.0"
