"""Thermo-optic resonance shift, equilibrium temperature, bistable sweeps.

Absorbed light heats the disk, the resonance redshifts with temperature, and
for large dropped power the transmission becomes multivalued in wavelength:
the sweep direction then selects a branch (hysteresis).  The lumped shift is
written in wavelength units throughout this module because the bistable
lineshape is naturally expressed there; angular detunings appear only in
:func:`extract_detuning` output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.optimize import brentq

from diskmech.cavity import (
    OpticalMode,
    SweepTrace,
    _mode_solver_params,
    _transmission_wavelength_scalar,
    transmission,
)
from diskmech.errors import NonConvergenceError

# Single-crystal diamond at room temperature: thermal expansion ~1e-6/K and
# dn/dT ~ 1e-5/K with n = 2.4, unity mode-overlap factors.
DIAMOND_EXPANSION = 1.0e-6
DIAMOND_DN_DT = 1.0e-5
DIAMOND_INDEX = 2.4


def lumped_thermo_optic_coefficient(
    expansion: float = DIAMOND_EXPANSION,
    dn_dt: float = DIAMOND_DN_DT,
    index: float = DIAMOND_INDEX,
    overlap_expansion: float = 1.0,
    overlap_index: float = 1.0,
) -> float:
    """Lumped dispersion coefficient a = eta_eps*eps + eta_T*(1/n)(dn/dT)."""
    return overlap_expansion * expansion + overlap_index * dn_dt / index


DEFAULT_THERMO_OPTIC_A = lumped_thermo_optic_coefficient()


@dataclass(frozen=True)
class ThermalModel:
    """Lumped thermal response of the microdisk.

    Parameters
    ----------
    thermo_optic_a : float
        Lumped thermo-optic dispersion coefficient (1/K).
    conductance : float
        Thermal conductance between mode volume and surroundings (W/K).
    absorbed_fraction : float
        Fraction of dropped power absorbed, gamma_abs / gamma_tot.
    softening_alpha : float
        Static mechanical softening per dropped power (rad/s per W);
        negative for softening.
    """

    thermo_optic_a: float = DEFAULT_THERMO_OPTIC_A
    conductance: float = 3.0e-6
    absorbed_fraction: float = 0.10
    softening_alpha: float = 0.0

    def __post_init__(self):
        if not self.thermo_optic_a > 0:
            raise ValueError("thermo_optic_a must be positive")
        if not self.conductance > 0:
            raise ValueError("conductance must be positive")
        if not 0.0 <= self.absorbed_fraction <= 1.0:
            raise ValueError("absorbed_fraction must lie in [0, 1]")


def shifted_wavelength(delta_t: float, lambda_o: float, thermo_optic_a: float) -> float:
    """Resonance wavelength at temperature rise delta_t: lambda_o * (1 + a*dT)."""
    if delta_t < 0:
        raise ValueError("delta_t must be >= 0")
    return lambda_o * (1.0 + thermo_optic_a * delta_t)


def temperature_from_shift(delta_lambda: float, lambda_o: float, thermo_optic_a: float) -> float:
    """Temperature rise implied by a resonance shift: (dlambda/lambda_o) / a."""
    return delta_lambda / (lambda_o * thermo_optic_a)


def equilibrium_temperature(dropped_power: float, model: ThermalModel) -> float:
    """Steady-state temperature rise: absorbed_fraction * P_d / K."""
    if np.any(np.asarray(dropped_power) < 0):
        raise ValueError("dropped power must be >= 0")
    out = model.absorbed_fraction * np.asarray(dropped_power) / model.conductance
    return out if np.ndim(out) else float(out)


def thermal_pull(lambda_o: float, model: ThermalModel, input_power: float) -> float:
    """Pull parameter d (m): lambda_o * (a/K) * absorbed_fraction * P_i.

    The self-consistent resonance shift is u = d * (1 - T), so d is the
    maximum possible thermo-optic shift in wavelength units.
    """
    if input_power < 0:
        raise ValueError("input_power must be >= 0")
    return lambda_o * model.thermo_optic_a * model.absorbed_fraction * input_power / model.conductance


def _nearest_stable_root(g, lo: float, hi: float, u_prev: float, n: int, xtol: float):
    """Nearest-to-u_prev stable fixed point in [lo, hi], or None.

    Stable equilibria of the thermal feedback have f'(u) < 1, i.e. the
    residual g(u) = u - f(u) crosses zero upward; downward crossings are the
    unstable middle branch and are never returned.
    """
    grid = np.linspace(lo, hi, n)
    vals = np.array([g(u) for u in grid])
    if not np.all(np.isfinite(vals)):
        raise NonConvergenceError("thermal shift residual is not finite")
    best = None
    for i in np.flatnonzero((vals[:-1] < 0) & (vals[1:] >= 0)):
        root = grid[i + 1] if vals[i + 1] == 0.0 else brentq(g, grid[i], grid[i + 1], xtol=xtol)
        if best is None or abs(root - u_prev) < abs(best - u_prev):
            best = root
    if vals[0] == 0.0 and (best is None or abs(grid[0] - u_prev) < abs(best - u_prev)):
        best = grid[0]
    return best


def _solve_shift_point(
    lam_s: float,
    lam_o: float,
    d: float,
    params: tuple,
    u_prev: float,
    tol: float,
    n_grid: int,
    lw: float,
) -> float:
    """Self-consistent thermal shift at one sweep point, warm-started.

    A guarded Newton step from the previous branch point handles the smooth
    stretches (the drag branch can have f' << -1, where plain fixed-point
    iteration hops basins); near folds it bails out to bracketed scans over
    expanding windows, selecting the stable root continuous with u_prev.
    """
    if d == 0.0:
        return 0.0

    def g(u: float) -> float:
        return u - d * (1.0 - _transmission_wavelength_scalar(lam_s - lam_o - u, params))

    u = min(max(u_prev, 0.0), d)
    fd_step = 1e-4 * lw
    for _ in range(40):
        gu = g(u)
        slope = (g(u + fd_step) - gu) / fd_step
        if slope <= 0.0:
            break  # at/past a fold: no stable root here
        step = -gu / slope
        if abs(step) > 4.0 * lw:
            break  # suspiciously large move: let the scans decide
        u = min(max(u + step, 0.0), d)
        if abs(step) < tol:
            if abs(u - u_prev) <= 8.0 * lw:
                return u
            break  # converged far away: re-check branch continuity

    # bracketed scans over expanding windows around the previous point
    for h in (0.5 * lw, 2.0 * lw, 8.0 * lw):
        lo, hi = max(0.0, u_prev - h), min(d, u_prev + h)
        if hi <= lo:
            continue
        root = _nearest_stable_root(g, lo, hi, u_prev, 97, tol)
        if root is not None:
            return root
        if lo == 0.0 and hi == d:
            break

    # full-range enumeration: the branch has jumped (fold) or d >> window
    root = _nearest_stable_root(g, 0.0, d, u_prev, n_grid, tol)
    if root is None:
        raise NonConvergenceError(
            f"no thermal fixed point found at lambda_s = {lam_s:.6e} m (d = {d:.3e} m)"
        )
    return root


def bistable_sweep(
    wavelengths,
    input_power: float,
    scan_direction: str,
    mode: OpticalMode,
    d_param: float,
) -> SweepTrace:
    """Simulate a transmission sweep with thermo-optic feedback.

    At each source wavelength the thermal shift u solves the fixed point
    u = d * (1 - T(lambda_s - lambda_o - u)), following the branch continuous
    with the previous sweep point; up- and down-scans may therefore differ.

    Parameters
    ----------
    wavelengths : array
        Strictly monotone wavelength grid (m).  Reordered to match the scan
        direction if supplied the other way.
    input_power : float
        Power launched in the taper (W); recorded in the trace metadata.
    scan_direction : str
        "up" or "down".
    mode : OpticalMode
        Cold-cavity mode.
    d_param : float
        Pull parameter in wavelength units (m), see :func:`thermal_pull`.

    Raises
    ------
    NonConvergenceError
        If no self-consistent shift can be found (pathological parameters).
    """
    lam = np.asarray(wavelengths, dtype=float)
    if lam.ndim != 1 or lam.size < 2:
        raise ValueError("wavelength grid must be a 1-d array with >= 2 samples")
    dlam = np.diff(lam)
    if not (np.all(dlam > 0) or np.all(dlam < 0)):
        raise ValueError("wavelength grid must be strictly monotone")
    if d_param < 0:
        raise ValueError("d_param must be >= 0")
    if scan_direction not in ("up", "down"):
        raise ValueError("scan_direction must be 'up' or 'down'")

    ascending = dlam[0] > 0
    if (scan_direction == "up") != ascending:
        lam = lam[::-1]

    if d_param == 0.0:
        t_bar = transmission(mode.detuning_from_wavelength(lam), mode)
        return SweepTrace(lam, t_bar, input_power, scan_direction)

    params = _mode_solver_params(mode)
    lw = mode.linewidth_wavelength
    tol = max(lw * 1e-9, 256.0 * np.finfo(float).eps * mode.lambda_o)
    n_grid = int(min(8193, max(257, 16.0 * d_param / lw)))

    t_bar = np.empty_like(lam)
    u = 0.0
    for i, lam_s in enumerate(lam):
        u = _solve_shift_point(lam_s, mode.lambda_o, d_param, params, u, tol, n_grid, lw)
        t_bar[i] = _transmission_wavelength_scalar(lam_s - mode.lambda_o - u, params)
    return SweepTrace(lam, t_bar, input_power, scan_direction, metadata={"d_param_m": d_param})


def extract_detuning(trace: SweepTrace, lambda_o: float, d_param: float) -> np.ndarray:
    """Per-sample angular detuning from a bistable trace and fitted (lambda_o, d).

    The wavelength detuning is lambda_s - lambda_o - d*(1 - T); the sign
    convention Delta = omega_s - omega_o makes the angular detuning
    -2*pi*c*dlambda / lambda_o^2.
    """
    delta_lambda = trace.wavelengths - lambda_o - d_param * (1.0 - trace.transmission)
    return -2.0 * np.pi * C_LIGHT * delta_lambda / lambda_o**2
