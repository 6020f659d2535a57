"""Device configuration: one JSON document per device with explicit units.

Every key carries its unit as a suffix (``lambda_o_m``, ``g0_hz``) to keep
mixed-unit sources from drifting.  Rates are linear frequencies (Hz) at this
boundary and angular internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from diskmech.backaction import OperatingPoint, OptomechanicalCoupling
from diskmech.cavity import OpticalMode
from diskmech.mechanics import MechanicalMode
from diskmech.spin import SpinSusceptibility
from diskmech.thermal import DEFAULT_THERMO_OPTIC_A, ThermalModel

TWO_PI = 2.0 * np.pi


@dataclass
class DeviceConfig:
    """Full device description used by the reporting and CLI layers."""

    optics: OpticalMode
    mechanics: MechanicalMode
    thermal: ThermalModel
    coupling: OptomechanicalCoupling
    spin: SpinSusceptibility
    operating: OperatingPoint | None = None
    amplitude: float | None = None
    temperature: float = 295.0
    input_power: float | None = None

    def validated(self) -> "DeviceConfig":
        """Cross-section consistency checks; raises naming the bad invariant."""
        if self.operating is not None:
            self.operating.check_consistency(self.optics)
        if self.amplitude is not None and self.amplitude < 0:
            raise ValueError("operating.amplitude_m must be >= 0")
        if self.temperature <= 0:
            raise ValueError("temperature_k must be > 0")
        return self


def reference_device() -> DeviceConfig:
    """The headline diamond microdisk: 1530 nm mode coupled to a 2.1 GHz RBM."""
    return DeviceConfig(
        optics=OpticalMode(lambda_o=1530e-9, q_intrinsic=6.4e4, q_loaded=6.0e4),
        mechanics=MechanicalMode(f_m=2.1e9, q_m=9000.0, m_eff=4.0e-14),
        thermal=ThermalModel(
            thermo_optic_a=DEFAULT_THERMO_OPTIC_A,
            conductance=3.0e-6,
            absorbed_fraction=0.10,
            softening_alpha=-TWO_PI * 2.5e8,
        ),
        coupling=OptomechanicalCoupling(g0=TWO_PI * 26e3),
        spin=SpinSusceptibility(ground_state_d=20e9),
    )


def _require(section: dict, key: str, section_name: str) -> float:
    if key not in section:
        raise ValueError(f"config section {section_name!r} is missing key {key!r}")
    return section[key]


def config_from_dict(doc: dict) -> DeviceConfig:
    """Build a validated DeviceConfig from a parsed JSON document."""
    for section in ("optics", "mechanics", "thermal", "coupling", "spin"):
        if section not in doc:
            raise ValueError(f"config is missing section {section!r}")
    opt = doc["optics"]
    mech = doc["mechanics"]
    th = doc["thermal"]
    cpl = doc["coupling"]
    sp = doc["spin"]

    optics = OpticalMode(
        lambda_o=_require(opt, "lambda_o_m", "optics"),
        q_intrinsic=_require(opt, "q_intrinsic", "optics"),
        q_loaded=_require(opt, "q_loaded", "optics"),
        doublet_splitting=TWO_PI * opt.get("doublet_splitting_hz", 0.0),
    )
    mechanics = MechanicalMode(
        f_m=_require(mech, "f_m_hz", "mechanics"),
        q_m=_require(mech, "q_m", "mechanics"),
        m_eff=_require(mech, "m_eff_kg", "mechanics"),
        strain_per_meter=mech.get("strain_per_meter", MechanicalMode.strain_per_meter),
    )
    thermal = ThermalModel(
        thermo_optic_a=th.get("thermo_optic_per_k", DEFAULT_THERMO_OPTIC_A),
        conductance=_require(th, "conductance_w_per_k", "thermal"),
        absorbed_fraction=_require(th, "absorbed_fraction", "thermal"),
        softening_alpha=TWO_PI * th.get("softening_alpha_hz_per_w", 0.0),
    )
    coupling = OptomechanicalCoupling(g0=TWO_PI * _require(cpl, "g0_hz", "coupling"))
    spin = SpinSusceptibility(
        ground_state_d=_require(sp, "ground_state_d_hz_per_strain", "spin"),
        excited_state_factor=sp.get("excited_state_factor", 1.0e5),
        location_derating=sp.get("location_derating", 1.0),
    )

    operating = None
    amplitude = None
    temperature = 295.0
    input_power = None
    if "operating" in doc:
        op = doc["operating"]
        operating = OperatingPoint(
            detuning=TWO_PI * op.get("detuning_hz", 0.0),
            photon_number=op.get("photon_number", 0.0),
            dropped_power=op.get("dropped_power_w", 0.0),
        )
        amplitude = op.get("amplitude_m")
        temperature = op.get("temperature_k", 295.0)
        input_power = op.get("input_power_w")

    return DeviceConfig(
        optics=optics,
        mechanics=mechanics,
        thermal=thermal,
        coupling=coupling,
        spin=spin,
        operating=operating,
        amplitude=amplitude,
        temperature=temperature,
        input_power=input_power,
    ).validated()


def config_to_dict(config: DeviceConfig) -> dict:
    """Serialize a DeviceConfig back to its JSON document form."""
    doc = {
        "optics": {
            "lambda_o_m": config.optics.lambda_o,
            "q_intrinsic": config.optics.q_intrinsic,
            "q_loaded": config.optics.q_loaded,
            "doublet_splitting_hz": config.optics.doublet_splitting / TWO_PI,
        },
        "mechanics": {
            "f_m_hz": config.mechanics.f_m,
            "q_m": config.mechanics.q_m,
            "m_eff_kg": config.mechanics.m_eff,
            "strain_per_meter": config.mechanics.strain_per_meter,
        },
        "thermal": {
            "thermo_optic_per_k": config.thermal.thermo_optic_a,
            "conductance_w_per_k": config.thermal.conductance,
            "absorbed_fraction": config.thermal.absorbed_fraction,
            "softening_alpha_hz_per_w": config.thermal.softening_alpha / TWO_PI,
        },
        "coupling": {"g0_hz": config.coupling.g0 / TWO_PI},
        "spin": {
            "ground_state_d_hz_per_strain": config.spin.ground_state_d,
            "excited_state_factor": config.spin.excited_state_factor,
            "location_derating": config.spin.location_derating,
        },
    }
    if config.operating is not None or config.amplitude is not None or config.input_power is not None:
        op = {
            "detuning_hz": (config.operating.detuning / TWO_PI) if config.operating else 0.0,
            "photon_number": config.operating.photon_number if config.operating else 0.0,
            "dropped_power_w": config.operating.dropped_power if config.operating else 0.0,
            "temperature_k": config.temperature,
        }
        if config.amplitude is not None:
            op["amplitude_m"] = config.amplitude
        if config.input_power is not None:
            op["input_power_w"] = config.input_power
        doc["operating"] = op
    return doc


def load_device_config(path) -> DeviceConfig:
    """Read and validate a device JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def save_device_config(config: DeviceConfig, path) -> None:
    """Write a device JSON file (sorted keys, lossless floats)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(config), fh, indent=2, sort_keys=True)
        fh.write("\n")
