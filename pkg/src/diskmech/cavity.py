"""Steady-state optical response of a fiber-coupled microdisk.

Transmission lineshapes (singlet and backscattering doublet), dropped power,
and intracavity photon number.  All detunings are angular frequencies; the
wavelength-to-frequency conversion happens only at I/O boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.constants import hbar


@dataclass(frozen=True)
class OpticalMode:
    """A whispering-gallery optical mode loaded by a fiber taper.

    Parameters
    ----------
    lambda_o : float
        Cold-cavity resonance wavelength (m).
    q_intrinsic : float
        Intrinsic quality factor.
    q_loaded : float
        Taper-loaded quality factor.  Loading only adds loss, so
        ``q_loaded <= q_intrinsic``.
    doublet_splitting : float
        Full backscattering doublet splitting (rad/s); 0 means singlet.
    """

    lambda_o: float
    q_intrinsic: float
    q_loaded: float
    doublet_splitting: float = 0.0

    def __post_init__(self):
        if not (self.lambda_o > 0 and np.isfinite(self.lambda_o)):
            raise ValueError(f"lambda_o must be positive and finite, got {self.lambda_o}")
        if not (self.q_intrinsic > 0 and self.q_loaded > 0):
            raise ValueError("quality factors must be positive")
        if self.q_loaded > self.q_intrinsic * (1 + 1e-12):
            raise ValueError(
                f"q_loaded ({self.q_loaded:g}) exceeds q_intrinsic ({self.q_intrinsic:g}); "
                "fiber loading only adds loss"
            )
        if self.doublet_splitting < 0 or not np.isfinite(self.doublet_splitting):
            raise ValueError("doublet_splitting must be >= 0 and finite")

    @property
    def omega_o(self) -> float:
        """Resonance angular frequency (rad/s)."""
        return 2.0 * np.pi * C_LIGHT / self.lambda_o

    @property
    def gamma_intrinsic(self) -> float:
        """Intrinsic decay rate (rad/s)."""
        return self.omega_o / self.q_intrinsic

    @property
    def gamma_loaded(self) -> float:
        """Total (taper-loaded) decay rate (rad/s)."""
        return self.omega_o / self.q_loaded

    @property
    def gamma_external(self) -> float:
        """Taper coupling rate (rad/s), gamma_loaded - gamma_intrinsic."""
        return self.gamma_loaded - self.gamma_intrinsic

    @property
    def linewidth_wavelength(self) -> float:
        """Loaded FWHM expressed in wavelength units (m), lambda_o / q_loaded."""
        return self.lambda_o / self.q_loaded

    def detuning_from_wavelength(self, lambda_s) -> np.ndarray | float:
        """Angular detuning omega_s - omega_o for source wavelength(s) in m.

        Linearized around lambda_o, consistent with how bistable lineshapes
        are written in wavelength units.
        """
        return -2.0 * np.pi * C_LIGHT * (np.asarray(lambda_s) - self.lambda_o) / self.lambda_o**2

    def wavelength_from_detuning(self, detuning) -> np.ndarray | float:
        """Inverse of :meth:`detuning_from_wavelength`."""
        return self.lambda_o - np.asarray(detuning) * self.lambda_o**2 / (2.0 * np.pi * C_LIGHT)


@dataclass
class SweepTrace:
    """A wavelength sweep of normalized taper transmission.

    Wavelengths are strictly monotone in the scan direction (increasing for
    an up-scan, decreasing for a down-scan); transmission lies in [0, 1].
    """

    wavelengths: np.ndarray
    transmission: np.ndarray
    input_power: float
    scan_direction: str = "up"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.wavelengths = np.asarray(self.wavelengths, dtype=float)
        self.transmission = np.asarray(self.transmission, dtype=float)
        if self.wavelengths.shape != self.transmission.shape or self.wavelengths.ndim != 1:
            raise ValueError("wavelengths and transmission must be 1-d arrays of equal length")
        if self.scan_direction not in ("up", "down"):
            raise ValueError(f"scan_direction must be 'up' or 'down', got {self.scan_direction!r}")
        dlam = np.diff(self.wavelengths)
        if self.scan_direction == "up" and not np.all(dlam > 0):
            raise ValueError("up-scan wavelengths must be strictly increasing")
        if self.scan_direction == "down" and not np.all(dlam < 0):
            raise ValueError("down-scan wavelengths must be strictly decreasing")
        if self.input_power < 0:
            raise ValueError("input_power must be >= 0")
        # tolerate float slop from normalization, then clip hard
        if np.any(self.transmission < -1e-9) or np.any(self.transmission > 1 + 1e-9):
            raise ValueError("transmission must lie in [0, 1] after normalization")
        self.transmission = np.clip(self.transmission, 0.0, 1.0)

    def __len__(self) -> int:
        return self.wavelengths.size


def _lorentzian_response(delta, gamma_loaded):
    """Cavity response L(delta) = 1 / (i*delta + gamma_loaded/2)."""
    return 1.0 / (1j * np.asarray(delta, dtype=float) + 0.5 * gamma_loaded)


def transmission_amplitude(detuning, mode: OpticalMode):
    """Complex field transmission t(detuning) of the all-pass cavity.

    Singlet: t = 1 - gamma_ex * L(detuning).  Doublet with full splitting
    2*beta: t = 1 - (gamma_ex/2) * [L(detuning - beta) + L(detuning + beta)],
    an equal-weight symmetric standing-wave pair.
    """
    detuning = np.asarray(detuning, dtype=float)
    if not np.all(np.isfinite(detuning)):
        raise ValueError("detuning must be finite")
    g_ex = mode.gamma_external
    g_t = mode.gamma_loaded
    if mode.doublet_splitting == 0.0:
        return 1.0 - g_ex * _lorentzian_response(detuning, g_t)
    beta = 0.5 * mode.doublet_splitting
    return 1.0 - 0.5 * g_ex * (
        _lorentzian_response(detuning - beta, g_t)
        + _lorentzian_response(detuning + beta, g_t)
    )


def transmission(detuning, mode: OpticalMode):
    """Normalized power transmission |t(detuning)|^2, in [0, 1]."""
    t = transmission_amplitude(detuning, mode)
    result = np.abs(t) ** 2
    return np.clip(result, 0.0, 1.0) if result.ndim else float(min(max(result, 0.0), 1.0))


def _transmission_wavelength_scalar(lambda_detuning: float, mode_params: tuple) -> float:
    """Scalar fast path used by the thermal fixed-point solver.

    ``mode_params`` is (gamma_ex, gamma_t, beta, dlam_to_domega); plain-float
    math avoids numpy scalar overhead in the inner loop.
    """
    g_ex, g_t, beta, dlam_to_domega = mode_params
    delta = dlam_to_domega * lambda_detuning
    if beta == 0.0:
        t = 1.0 - g_ex / complex(0.5 * g_t, delta)
    else:
        t = 1.0 - 0.5 * g_ex * (
            1.0 / complex(0.5 * g_t, delta - beta) + 1.0 / complex(0.5 * g_t, delta + beta)
        )
    val = t.real * t.real + t.imag * t.imag
    return 0.0 if val < 0.0 else (1.0 if val > 1.0 else val)


def _mode_solver_params(mode: OpticalMode) -> tuple:
    """Precomputed constants for :func:`_transmission_wavelength_scalar`."""
    dlam_to_domega = -2.0 * np.pi * C_LIGHT / mode.lambda_o**2
    return (mode.gamma_external, mode.gamma_loaded, 0.5 * mode.doublet_splitting, dlam_to_domega)


def dropped_power(transmission_value, input_power):
    """Power dropped into the cavity, P_d = (1 - T) * P_i."""
    t_bar = np.asarray(transmission_value, dtype=float)
    if np.any(t_bar < 0) or np.any(t_bar > 1):
        raise ValueError("transmission must lie in [0, 1]")
    if np.any(np.asarray(input_power) < 0):
        raise ValueError("input_power must be >= 0")
    out = (1.0 - t_bar) * input_power
    return out if out.ndim else float(out)


def intracavity_photons(dropped_power_w, mode: OpticalMode):
    """Steady-state intracavity photon number from dropped power.

    Energy balance: in steady state the dropped power equals the intrinsic
    dissipation, so N = P_d / (hbar * omega_o * gamma_intrinsic).
    """
    p_d = np.asarray(dropped_power_w, dtype=float)
    if np.any(p_d < 0):
        raise ValueError("dropped power must be >= 0")
    denom = hbar * mode.omega_o * mode.gamma_intrinsic
    if denom == 0:
        raise ValueError("intrinsic decay rate must be nonzero")
    out = p_d / denom
    return out if out.ndim else float(out)


def intracavity_photons_from_field(detuning, mode: OpticalMode, input_power: float):
    """Photon number from the steady-state field solution at a given detuning.

    For the singlet, N = gamma_ex |L(detuning)|^2 * P_i / (hbar omega_o); for
    the doublet each standing-wave mode carries gamma_ex/2.  For the singlet
    this reproduces intracavity_photons(dropped_power(T, P_i)) identically;
    the doublet additionally scatters power into the backward channel, which
    transmission alone does not see.
    """
    if input_power < 0:
        raise ValueError("input_power must be >= 0")
    flux = input_power / (hbar * mode.omega_o)
    g_ex = mode.gamma_external
    g_t = mode.gamma_loaded
    if mode.doublet_splitting == 0.0:
        occ = g_ex * np.abs(_lorentzian_response(detuning, g_t)) ** 2
    else:
        beta = 0.5 * mode.doublet_splitting
        detuning = np.asarray(detuning, dtype=float)
        occ = 0.5 * g_ex * (
            np.abs(_lorentzian_response(detuning - beta, g_t)) ** 2
            + np.abs(_lorentzian_response(detuning + beta, g_t)) ** 2
        )
    out = occ * flux
    return out if np.ndim(out) else float(out)
