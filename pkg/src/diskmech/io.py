"""CSV/JSON interchange for traces, backaction sweeps, fit reports, surveys.

CSV columns are the documented wire formats; numbers are written with
shortest round-trip float formatting so every emitted file reads back
losslessly.  Sidecar metadata lives in a JSON file next to the CSV
(``trace.csv`` -> ``trace.json``).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from diskmech.cavity import SweepTrace
from diskmech.fitting import FitResult
from diskmech.spectra import SpectrumTrace

TWO_PI = 2.0 * np.pi

SURVEY_ENVIRONMENTS = ("ambient", "low-pressure", "cryogenic")


def sidecar_path(csv_path) -> str:
    root, _ = os.path.splitext(os.fspath(csv_path))
    return root + ".json"


def _write_rows(path, header: list, columns: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([repr(float(v)) if isinstance(v, (int, float, np.floating)) else v for v in row])


def _read_table(path, expected: list) -> dict:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        missing = [c for c in expected if c not in names]
        if missing:
            raise ValueError(f"{path}: missing CSV columns {missing}; found {names}")
        rows = list(reader)
    return {name: [row[name] for row in rows] for name in names}


def _write_sidecar(csv_path, payload: dict) -> None:
    with open(sidecar_path(csv_path), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_sidecar(csv_path) -> dict:
    path = sidecar_path(csv_path)
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------- sweep trace

def write_sweep_csv(trace: SweepTrace, path) -> None:
    """Write `lambda_nm,transmission` plus a JSON sidecar with the metadata."""
    _write_rows(path, ["lambda_nm", "transmission"], [trace.wavelengths * 1e9, trace.transmission])
    payload = {
        "input_power_w": trace.input_power,
        "scan_direction": trace.scan_direction,
    }
    payload.update(trace.metadata)
    _write_sidecar(path, payload)


def read_sweep_csv(path) -> SweepTrace:
    table = _read_table(path, ["lambda_nm", "transmission"])
    meta = _read_sidecar(path)
    extra = {k: v for k, v in meta.items() if k not in ("input_power_w", "scan_direction")}
    return SweepTrace(
        wavelengths=np.array([float(v) for v in table["lambda_nm"]]) * 1e-9,
        transmission=np.array([float(v) for v in table["transmission"]]),
        input_power=float(meta.get("input_power_w", 0.0)),
        scan_direction=meta.get("scan_direction", "up"),
        metadata=extra,
    )


# ------------------------------------------------------------- spectrum trace

def write_spectrum_csv(trace: SpectrumTrace, path) -> None:
    """Write `freq_hz,psd` plus the acquisition sidecar."""
    _write_rows(path, ["freq_hz", "psd"], [trace.freq, trace.psd])
    payload = {
        "input_power_w": trace.input_power,
        "detuning_hz": None if trace.detuning is None else trace.detuning / TWO_PI,
        "rbw_hz": trace.rbw,
        "seed": trace.seed,
    }
    payload.update(trace.metadata)
    _write_sidecar(path, payload)


def read_spectrum_csv(path) -> SpectrumTrace:
    table = _read_table(path, ["freq_hz", "psd"])
    meta = _read_sidecar(path)
    known = ("input_power_w", "detuning_hz", "rbw_hz", "seed")
    extra = {k: v for k, v in meta.items() if k not in known}
    detuning_hz = meta.get("detuning_hz")
    return SpectrumTrace(
        freq=np.array([float(v) for v in table["freq_hz"]]),
        psd=np.array([float(v) for v in table["psd"]]),
        input_power=meta.get("input_power_w"),
        detuning=None if detuning_hz is None else TWO_PI * detuning_hz,
        rbw=meta.get("rbw_hz"),
        seed=meta.get("seed"),
        metadata=extra,
    )


# ----------------------------------------------------------- backaction sweep

def write_backaction_csv(sweep: dict, path, sigma=None, dropped_power=None) -> None:
    """Write `detuning_hz,photon_number,dgamma_hz,domega_hz` (linear Hz).

    Optional per-point `sigma_hz` and `dropped_power_w` columns are appended
    when given; readers ignore columns they do not know.
    """
    header = ["detuning_hz", "photon_number", "dgamma_hz", "domega_hz"]
    columns = [
        np.asarray(sweep["detuning"]) / TWO_PI,
        np.asarray(sweep["photon_number"]),
        np.asarray(sweep["dgamma"]) / TWO_PI,
        np.asarray(sweep["domega"]) / TWO_PI,
    ]
    if sigma is not None:
        header.append("sigma_hz")
        columns.append(np.asarray(sigma) / TWO_PI)
    if dropped_power is not None:
        header.append("dropped_power_w")
        columns.append(np.asarray(dropped_power))
    _write_rows(path, header, columns)


def read_backaction_csv(path) -> dict:
    """Read a backaction sweep; all rates returned in angular units."""
    table = _read_table(path, ["detuning_hz", "photon_number", "dgamma_hz", "domega_hz"])
    out = {
        "detuning": TWO_PI * np.array([float(v) for v in table["detuning_hz"]]),
        "photon_number": np.array([float(v) for v in table["photon_number"]]),
        "dgamma": TWO_PI * np.array([float(v) for v in table["dgamma_hz"]]),
        "domega": TWO_PI * np.array([float(v) for v in table["domega_hz"]]),
    }
    if "sigma_hz" in table:
        out["sigma"] = TWO_PI * np.array([float(v) for v in table["sigma_hz"]])
    if "dropped_power_w" in table:
        out["dropped_power"] = np.array([float(v) for v in table["dropped_power_w"]])
    return out


# ------------------------------------------------------------------ fit report

def write_fit_report_json(fit: FitResult, path) -> None:
    """Emit a fit as JSON rows of {parameter, estimate, ci95, units}."""
    doc = {
        "parameters": fit.as_report(),
        "residual_rms": fit.residual_rms,
        "status": fit.status,
        "iterations": fit.n_iterations,
        "notes": list(fit.notes),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------- survey

@dataclass(frozen=True)
class SurveyEntry:
    """One device in the quality-factor frequency-product survey."""

    label: str
    material: str
    structure: str
    qf_product: float
    environment: str

    def __post_init__(self):
        if not self.qf_product > 0:
            raise ValueError(f"qf_product must be > 0, got {self.qf_product}")
        if self.environment not in SURVEY_ENVIRONMENTS:
            raise ValueError(
                f"environment must be one of {SURVEY_ENVIRONMENTS}, got {self.environment!r}"
            )


def read_survey_csv(path) -> list:
    """Read `label,material,structure,qf_hz,environment` rows."""
    table = _read_table(path, ["label", "material", "structure", "qf_hz", "environment"])
    return [
        SurveyEntry(label, material, structure, float(qf), env)
        for label, material, structure, qf, env in zip(
            table["label"], table["material"], table["structure"], table["qf_hz"], table["environment"]
        )
    ]


def write_survey_csv(entries, path, ranked: bool = False) -> None:
    header = ["label", "material", "structure", "qf_hz", "environment"]
    columns = [
        [e.label for e in entries],
        [e.material for e in entries],
        [e.structure for e in entries],
        [e.qf_product for e in entries],
        [e.environment for e in entries],
    ]
    if ranked:
        header = ["rank"] + header
        columns = [[str(i + 1) for i in range(len(entries))]] + columns
    _write_rows(path, header, columns)


def rank_survey(entries) -> list:
    """Entries sorted by descending Q*f product (the comparison-plot order)."""
    return sorted(entries, key=lambda e: (-e.qf_product, e.label))
