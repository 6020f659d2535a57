"""NV-center strain-coupling estimates from mechanical amplitudes."""

from __future__ import annotations

from dataclasses import dataclass

from diskmech.mechanics import MechanicalMode


@dataclass(frozen=True)
class SpinSusceptibility:
    """Strain response of the NV electron spin.

    ``ground_state_d`` is the ground-state strain susceptibility in Hz per
    unit strain; ``excited_state_factor`` scales it to the excited-state
    manifold (~1e5).  ``location_derating`` (default 1) derates the strain
    seen by a spin away from the strain maximum.
    """

    ground_state_d: float
    excited_state_factor: float = 1.0e5
    location_derating: float = 1.0

    def __post_init__(self):
        if not self.ground_state_d > 0:
            raise ValueError("ground_state_d must be positive")
        if not self.excited_state_factor > 0:
            raise ValueError("excited_state_factor must be positive")
        if not 0.0 < self.location_derating <= 1.0:
            raise ValueError("location_derating must lie in (0, 1]")


def single_phonon_coupling(mech: MechanicalMode, spin: SpinSusceptibility) -> float:
    """Ground-state single-phonon coupling rate g_e/2pi (Hz): d * eps_zpm."""
    return spin.ground_state_d * spin.location_derating * mech.strain_zpm


def driven_coupling(mech: MechanicalMode, spin: SpinSusceptibility, amplitude: float) -> float:
    """Coupling rate G/2pi (Hz) for a coherently driven amplitude (m).

    Exactly linear in amplitude: G = g_e * amplitude / x_zpm.
    """
    if amplitude < 0:
        raise ValueError("amplitude must be >= 0")
    return single_phonon_coupling(mech, spin) * amplitude / mech.x_zpm


def excited_state_coupling(mech: MechanicalMode, spin: SpinSusceptibility) -> float:
    """Excited-state single-phonon coupling estimate (Hz)."""
    return single_phonon_coupling(mech, spin) * spin.excited_state_factor
