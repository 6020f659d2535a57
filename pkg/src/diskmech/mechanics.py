"""Mechanical-mode bookkeeping: zero-point motion, thermal amplitude,
quality-factor composition, occupancy, and figures of merit."""

from __future__ import annotations

from dataclasses import dataclass
from math import expm1

import numpy as np
from scipy.constants import hbar, k as k_B

# Peak strain per unit peak displacement of the radial breathing mode,
# back-computed from FEM-level numbers; configurable per device.
DEFAULT_STRAIN_PER_METER = 9.4e5


@dataclass(frozen=True)
class MechanicalMode:
    """A mechanical resonance of the microdisk (typically the RBM).

    Parameters
    ----------
    f_m : float
        Mechanical frequency (Hz).
    q_m : float
        Mechanical quality factor.
    m_eff : float
        Effective mass (kg).
    strain_per_meter : float
        Peak strain per unit peak displacement (1/m), an FEM input.
    """

    f_m: float
    q_m: float
    m_eff: float
    strain_per_meter: float = DEFAULT_STRAIN_PER_METER

    def __post_init__(self):
        for name in ("f_m", "q_m", "m_eff", "strain_per_meter"):
            value = getattr(self, name)
            if not (value > 0 and np.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")

    @property
    def omega_m(self) -> float:
        """Angular frequency (rad/s)."""
        return 2.0 * np.pi * self.f_m

    @property
    def gamma_m(self) -> float:
        """Intrinsic energy decay rate (rad/s), omega_m / q_m."""
        return self.omega_m / self.q_m

    @property
    def x_zpm(self) -> float:
        """Zero-point motion amplitude (m)."""
        return zero_point_motion(self)

    @property
    def strain_zpm(self) -> float:
        """Peak strain of the zero-point motion."""
        return self.strain_per_meter * self.x_zpm


def zero_point_motion(mode: MechanicalMode) -> float:
    """x_zpm = sqrt(hbar / (2 m_eff omega_m))."""
    return float(np.sqrt(hbar / (2.0 * mode.m_eff * mode.omega_m)))


def thermal_amplitude(mode: MechanicalMode, temperature: float) -> float:
    """Equipartition amplitude x_th = sqrt(k_B T / (m_eff omega_m^2))."""
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    return float(np.sqrt(k_B * temperature / (mode.m_eff * mode.omega_m**2)))


def combine_quality_factors(partials) -> float:
    """Total Q from per-mechanism partial Qs: harmonic-sum composition."""
    partials = np.asarray(list(partials), dtype=float)
    if partials.size == 0:
        raise ValueError("at least one partial quality factor required")
    if np.any(partials <= 0):
        raise ValueError("partial quality factors must be positive")
    return float(1.0 / np.sum(1.0 / partials))


def thermal_occupancy(mode: MechanicalMode, temperature: float) -> float:
    """Bose-Einstein phonon occupancy of the mode at the bath temperature."""
    if temperature <= 0:
        raise ValueError("temperature must be > 0")
    x = hbar * mode.omega_m / (k_B * temperature)
    return 1.0 / expm1(x)


def qf_product(mode: MechanicalMode) -> float:
    """Quality-factor frequency product Q_m * f_m (Hz)."""
    return mode.q_m * mode.f_m


def coherence_ratio(mode: MechanicalMode, temperature: float) -> float:
    """Ratio Q_m / n_th gating room-temperature single-phonon coherence.

    A value above 1 means thermal decoherence is slower than a mechanical
    oscillation.  The ratio itself is reported; no threshold is enforced.
    """
    return mode.q_m / thermal_occupancy(mode, temperature)
