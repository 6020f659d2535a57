"""Radiation-pressure dynamical backaction on the mechanical mode.

Damping change, frequency shift with static thermal softening, cooperativity,
the self-oscillation threshold, and self-oscillation detection.  Sign
convention: detuning = omega_s - omega_o, so blue detuning (> 0) anti-damps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from diskmech.cavity import OpticalMode, dropped_power, intracavity_photons, transmission
from diskmech.mechanics import MechanicalMode


@dataclass(frozen=True)
class OptomechanicalCoupling:
    """Single-photon optomechanical coupling rate g0 (rad/s)."""

    g0: float

    def __post_init__(self):
        if not (self.g0 > 0 and np.isfinite(self.g0)):
            raise ValueError("g0 must be positive and finite")

    def g_om(self, mech: MechanicalMode) -> float:
        """Frequency pull per displacement, g0 / x_zpm (rad/s per m)."""
        return self.g0 / mech.x_zpm


@dataclass(frozen=True)
class OperatingPoint:
    """Drive condition: detuning (rad/s), photon number, dropped power (W)."""

    detuning: float
    photon_number: float = 0.0
    dropped_power: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.detuning):
            raise ValueError("detuning must be finite")
        if self.photon_number < 0:
            raise ValueError("photon_number must be >= 0")
        if self.dropped_power < 0:
            raise ValueError("dropped_power must be >= 0")

    @classmethod
    def from_drive(cls, detuning: float, mode: OpticalMode, input_power: float) -> "OperatingPoint":
        """Build a self-consistent operating point from the lineshape."""
        t_bar = transmission(detuning, mode)
        p_d = dropped_power(t_bar, input_power)
        return cls(detuning, intracavity_photons(p_d, mode), p_d)

    def check_consistency(self, mode: OpticalMode, rtol: float = 1e-6) -> None:
        """Verify N against P_d via the photon-number relation, when both set."""
        if self.photon_number > 0 and self.dropped_power > 0:
            expected = intracavity_photons(self.dropped_power, mode)
            if not np.isclose(self.photon_number, expected, rtol=rtol):
                raise ValueError(
                    f"photon_number {self.photon_number:g} inconsistent with dropped_power "
                    f"{self.dropped_power:g} W (expected N = {expected:g})"
                )


def _spring_bracket(detuning, omega_m: float, gamma_o: float):
    """Detuning-dependent factor of the optical spring shift."""
    detuning = np.asarray(detuning, dtype=float)
    q = 0.25 * gamma_o**2
    return (detuning - omega_m) / (q + (detuning - omega_m) ** 2) + (detuning + omega_m) / (
        q + (detuning + omega_m) ** 2
    )


def _damping_bracket(detuning, omega_m: float, gamma_o: float):
    """Detuning-dependent factor of the backaction damping rate."""
    detuning = np.asarray(detuning, dtype=float)
    q = 0.25 * gamma_o**2
    return gamma_o / (q + (detuning + omega_m) ** 2) - gamma_o / (q + (detuning - omega_m) ** 2)


def damping_shift(
    op: OperatingPoint,
    g: OptomechanicalCoupling,
    mode: OpticalMode,
    mech: MechanicalMode,
):
    """Backaction change of the mechanical damping rate (rad/s).

    Antisymmetric in detuning; negative (anti-damping) for blue detuning.
    The optical rate entering the Lorentzian denominators is the loaded one,
    since the driven cavity is fiber-loaded.
    """
    return g.g0**2 * op.photon_number * _damping_bracket(
        op.detuning, mech.omega_m, mode.gamma_loaded
    )


def frequency_shift(
    op: OperatingPoint,
    g: OptomechanicalCoupling,
    mode: OpticalMode,
    mech: MechanicalMode,
    alpha: float,
):
    """Mechanical frequency shift (rad/s): optical spring plus static heating.

    The static term is alpha * P_d with alpha in rad/s per W (negative for
    thermal softening); it is linear in dropped power.
    """
    spring = g.g0**2 * op.photon_number * _spring_bracket(
        op.detuning, mech.omega_m, mode.gamma_loaded
    )
    return spring + alpha * op.dropped_power


def cooperativity(
    op: OperatingPoint,
    g: OptomechanicalCoupling,
    mode: OpticalMode,
    mech: MechanicalMode,
) -> float:
    """Optomechanical cooperativity C = N g0^2 / (gamma_o gamma_m)."""
    return op.photon_number * g.g0**2 / (mode.gamma_loaded * mech.gamma_m)


def _threshold_per_intrinsic_rate(
    mode: OpticalMode, mech: MechanicalMode, g: OptomechanicalCoupling
) -> float:
    """Threshold power per unit intrinsic decay rate (W·s/rad)."""
    g_om = g.g_om(mech)
    g_t = mode.gamma_loaded
    return (
        (mech.m_eff * mode.omega_o / (2.0 * g_om**2))
        * (mech.gamma_m / (mech.omega_m * g_t))
        * (0.5 * g_t) ** 2
        * ((2.0 * mech.omega_m) ** 2 + (0.5 * g_t) ** 2)
    )


def threshold_power(
    mode: OpticalMode, mech: MechanicalMode, g: OptomechanicalCoupling
) -> float:
    """Dropped-power threshold for self-oscillation at optimal blue detuning.

    P_T = (m_eff w_o / 2 g_om^2) (gamma_m gamma_i / w_m gamma_t)
          (gamma_t/2)^2 [(2 w_m)^2 + (gamma_t/2)^2]
    """
    return _threshold_per_intrinsic_rate(mode, mech, g) * mode.gamma_intrinsic


def intrinsic_q_for_threshold(
    target_power: float,
    mode: OpticalMode,
    mech: MechanicalMode,
    g: OptomechanicalCoupling,
) -> float:
    """Intrinsic Q that would reproduce a given threshold power.

    The threshold is linear in the intrinsic decay rate, so the inversion is
    closed-form; the loaded rate is taken from ``mode`` and the returned Q is
    not constrained to be physical (>= q_loaded), since it is a diagnostic.
    """
    if target_power <= 0:
        raise ValueError("target_power must be > 0")
    gamma_i = target_power / _threshold_per_intrinsic_rate(mode, mech, g)
    return mode.omega_o / gamma_i


def is_self_oscillating(
    op: OperatingPoint,
    g: OptomechanicalCoupling,
    mode: OpticalMode,
    mech: MechanicalMode,
) -> tuple[bool, float]:
    """Whether total damping has closed: gamma_m + dgamma <= 0 (inclusive).

    Returns (oscillating, margin) with margin = gamma_m + dgamma in rad/s;
    margin <= 0 means self-oscillation.
    """
    margin = mech.gamma_m + float(damping_shift(op, g, mode, mech))
    return margin <= 0.0, margin


def optical_spring_zero(mode: OpticalMode, mech: MechanicalMode) -> float:
    """Nontrivial zero of the optical spring factor between 0 and ~omega_m.

    The spring contribution vanishes at detuning 0, dips negative, and turns
    positive again below omega_m; the returned root marks the kink
    neighborhood of the total frequency-shift curve.
    """
    omega_m, gamma_o = mech.omega_m, mode.gamma_loaded

    def f(delta):
        return _spring_bracket(delta, omega_m, gamma_o)

    grid = np.linspace(1e-6 * omega_m, 1.5 * omega_m, 3001)
    vals = f(grid)
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if idx.size == 0:
        raise ValueError("no spring zero crossing found below 1.5 * omega_m")
    i = idx[0]
    return float(brentq(f, grid[i], grid[i + 1], xtol=1e-6))


def backaction_sweep(
    detunings,
    mode: OpticalMode,
    mech: MechanicalMode,
    g: OptomechanicalCoupling,
    input_power: float,
    alpha: float = 0.0,
) -> dict:
    """Evaluate backaction over a detuning grid, driving through the lineshape.

    At each detuning the photon number and dropped power follow from the
    cold-cavity transmission at the given input power.  Returns arrays (all
    angular units) keyed ``detuning``, ``photon_number``, ``dgamma``,
    ``domega``.
    """
    detunings = np.asarray(detunings, dtype=float)
    t_bar = transmission(detunings, mode)
    p_d = dropped_power(t_bar, input_power)
    n = intracavity_photons(p_d, mode)
    dgamma = g.g0**2 * n * _damping_bracket(detunings, mech.omega_m, mode.gamma_loaded)
    domega = g.g0**2 * n * _spring_bracket(detunings, mech.omega_m, mode.gamma_loaded) + alpha * p_d
    return {
        "detuning": detunings,
        "photon_number": np.asarray(n, dtype=float),
        "dgamma": np.asarray(dgamma, dtype=float),
        "domega": np.asarray(domega, dtype=float),
    }
