"""Figure-of-merit report: headline quantities for a configured device."""

from __future__ import annotations

import json

import numpy as np

from diskmech.backaction import (
    OperatingPoint,
    cooperativity,
    damping_shift,
    frequency_shift,
    is_self_oscillating,
    threshold_power,
)
from diskmech.config import DeviceConfig
from diskmech.mechanics import (
    coherence_ratio,
    qf_product,
    thermal_amplitude,
    thermal_occupancy,
    zero_point_motion,
)
from diskmech.spin import driven_coupling, single_phonon_coupling
from diskmech.thermal import equilibrium_temperature

TWO_PI = 2.0 * np.pi


def build_report(config: DeviceConfig) -> dict:
    """Assemble the device report; pure in its inputs.

    Each entry records the value, its units, and the formula used, so the
    numbers can be audited without reading the source.
    """
    config.validated()
    optics, mech = config.optics, config.mechanics
    op = config.operating or OperatingPoint(detuning=0.0)
    temperature = config.temperature

    entries = [
        {
            "name": "x_zpm",
            "value": zero_point_motion(mech),
            "units": "m",
            "formula": "sqrt(hbar / (2 m_eff omega_m))",
        },
        {
            "name": "x_th",
            "value": thermal_amplitude(mech, temperature),
            "units": "m",
            "formula": "sqrt(k_B T / (m_eff omega_m^2))",
        },
        {
            "name": "n_th",
            "value": thermal_occupancy(mech, temperature),
            "units": "",
            "formula": "1 / (exp(hbar omega_m / k_B T) - 1)",
        },
        {
            "name": "qf_product",
            "value": qf_product(mech),
            "units": "Hz",
            "formula": "Q_m * f_m",
        },
        {
            "name": "coherence_ratio",
            "value": coherence_ratio(mech, temperature),
            "units": "",
            "formula": "Q_m / n_th",
        },
        {
            "name": "cooperativity",
            "value": cooperativity(op, config.coupling, optics, mech),
            "units": "",
            "formula": "N g0^2 / (gamma_o gamma_m)",
        },
        {
            "name": "threshold_power",
            "value": threshold_power(optics, mech, config.coupling),
            "units": "W",
            "formula": "(m_eff w_o / 2 g_om^2)(gamma_m gamma_i / w_m gamma_t)(gamma_t/2)^2 [(2 w_m)^2 + (gamma_t/2)^2]",
        },
        {
            "name": "backaction_damping",
            "value": float(damping_shift(op, config.coupling, optics, mech)),
            "units": "rad/s",
            "formula": "g0^2 N [gamma/(gamma^2/4 + (D+w_m)^2) - gamma/(gamma^2/4 + (D-w_m)^2)]",
        },
        {
            "name": "frequency_shift",
            "value": float(
                frequency_shift(op, config.coupling, optics, mech, config.thermal.softening_alpha)
            ),
            "units": "rad/s",
            "formula": "optical spring + alpha P_d",
        },
        {
            "name": "self_oscillation_margin",
            "value": is_self_oscillating(op, config.coupling, optics, mech)[1],
            "units": "rad/s",
            "formula": "gamma_m + dgamma_m (<= 0 oscillating)",
        },
        {
            "name": "temperature_rise",
            "value": equilibrium_temperature(op.dropped_power, config.thermal),
            "units": "K",
            "formula": "absorbed_fraction * P_d / K",
        },
        {
            "name": "spin_coupling_single_phonon",
            "value": single_phonon_coupling(mech, config.spin),
            "units": "Hz",
            "formula": "d * eps_zpm",
        },
        {
            "name": "sideband_resolution",
            "value": optics.gamma_loaded / mech.omega_m,
            "units": "",
            "formula": "gamma_o / omega_m (< 1 resolved)",
        },
    ]
    if config.amplitude is not None:
        entries.append(
            {
                "name": "spin_coupling_driven",
                "value": driven_coupling(mech, config.spin, config.amplitude),
                "units": "Hz",
                "formula": "g_e * amplitude / x_zpm",
            }
        )
    return {"temperature_k": temperature, "entries": entries}


def report_to_json(report: dict) -> str:
    """Deterministic JSON rendering (byte-identical for identical inputs)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_to_csv(report: dict) -> str:
    """Flat `name,value,units,formula` rendering for tabular consumers."""
    lines = ["name,value,units,formula"]
    for entry in report["entries"]:
        formula = entry["formula"].replace('"', "'")
        lines.append(f"{entry['name']},{entry['value']!r},{entry['units']},\"{formula}\"")
    return "\n".join(lines) + "\n"
