"""Command-line surface: device reports, sweeps, synthesis, fits, survey.

Exit codes: 0 ok, 1 validation error, 2 non-convergence, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np
from scipy.constants import hbar

from diskmech import io as dio
from diskmech.backaction import (
    OperatingPoint,
    OptomechanicalCoupling,
    backaction_sweep,
    threshold_power,
)
from diskmech.cavity import SweepTrace, dropped_power, intracavity_photons, transmission
from diskmech.config import load_device_config
from diskmech.errors import NonConvergenceError
from diskmech.fitting import (
    STATUS_CONVERGED,
    fit_alpha,
    fit_bistable_lineshape,
    fit_g0,
    fit_lorentzian_psd,
)
from diskmech.mechanics import thermal_amplitude
from diskmech.report import build_report, report_to_csv, report_to_json
from diskmech.spectra import calibrate_amplitude, lorentzian_sxx, synthesize_sp
from diskmech.spin import driven_coupling, excited_state_coupling, single_phonon_coupling
from diskmech.thermal import bistable_sweep, thermal_pull

TWO_PI = 2.0 * np.pi

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NONCONVERGENCE = 2
EXIT_IO = 3


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _wavelength_grid(config, span_pm: float, points: int) -> np.ndarray:
    lam_o = config.optics.lambda_o
    span = span_pm * 1e-12
    return np.linspace(lam_o - 0.3 * span, lam_o + 0.7 * span, points)


def cmd_report(args) -> int:
    config = load_device_config(args.config)
    report = build_report(config)
    text = report_to_csv(report) if args.format == "csv" else report_to_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_transmission(args) -> int:
    config = load_device_config(args.config)
    lam = _wavelength_grid(config, args.span_pm, args.points)
    t_bar = transmission(config.optics.detuning_from_wavelength(lam), config.optics)
    trace = SweepTrace(lam, t_bar, args.power_w, args.scan_dir)
    dio.write_sweep_csv(trace, args.out)
    return EXIT_OK


def cmd_bistable_sweep(args) -> int:
    config = load_device_config(args.config)
    lam = _wavelength_grid(config, args.span_pm, args.points)
    d = thermal_pull(config.optics.lambda_o, config.thermal, args.power_w)
    trace = bistable_sweep(lam, args.power_w, args.scan_dir, config.optics, d)
    dio.write_sweep_csv(trace, args.out)
    return EXIT_OK


def cmd_fit_lineshape(args) -> int:
    trace = dio.read_sweep_csv(args.infile)
    fit = fit_bistable_lineshape(trace, seed=args.seed, n_starts=args.starts)
    dio.write_fit_report_json(fit, args.out)
    return EXIT_OK if fit.status == STATUS_CONVERGED else EXIT_NONCONVERGENCE


def cmd_psd_synth(args) -> int:
    config = load_device_config(args.config)
    mech = config.mechanics
    gamma_eff = TWO_PI * args.geff_hz if args.geff_hz is not None else mech.gamma_m
    detuning = (
        TWO_PI * args.detuning_hz
        if args.detuning_hz is not None
        else 0.5 * config.optics.gamma_loaded
    )
    sxx = lorentzian_sxx(mech, gamma_eff, mech.omega_m, args.temperature_k)
    t_bar = transmission(detuning, config.optics)
    p_d = dropped_power(t_bar, args.power_w)
    op = OperatingPoint(detuning, intracavity_photons(p_d, config.optics), p_d)
    trace = synthesize_sp(
        sxx,
        op,
        config.optics,
        config.coupling,
        mech,
        args.power_w,
        noise_floor=args.floor,
        noise_rel=args.noise_rel,
        seed=args.seed,
    )
    dio.write_spectrum_csv(trace, args.out)
    return EXIT_OK


def cmd_fit_psd(args) -> int:
    trace = dio.read_spectrum_csv(args.infile)
    fit = fit_lorentzian_psd(trace)
    dio.write_fit_report_json(fit, args.out)
    return EXIT_OK if fit.status == STATUS_CONVERGED else EXIT_NONCONVERGENCE


def cmd_backaction_sweep(args) -> int:
    config = load_device_config(args.config)
    det = np.linspace(args.min_detuning_wm, args.max_detuning_wm, args.points) * config.mechanics.omega_m
    sweep = backaction_sweep(
        det,
        config.optics,
        config.mechanics,
        config.coupling,
        args.power_w,
        alpha=config.thermal.softening_alpha,
    )
    p_d = dropped_power(transmission(det, config.optics), args.power_w)
    sigma = None
    if args.sigma_hz:
        sigma = np.full(det.size, TWO_PI * args.sigma_hz)
        rng = np.random.default_rng(args.seed)
        sweep["dgamma"] = sweep["dgamma"] + sigma * rng.standard_normal(det.size)
        sweep["domega"] = sweep["domega"] + sigma * rng.standard_normal(det.size)
    dio.write_backaction_csv(sweep, args.out, sigma=sigma, dropped_power=p_d)
    return EXIT_OK


def cmd_fit_g0(args) -> int:
    config = load_device_config(args.config)
    data = dio.read_backaction_csv(args.infile)
    fit = fit_g0(
        data["detuning"],
        data["photon_number"],
        data["dgamma"],
        config.optics,
        config.mechanics,
        sigma=data.get("sigma"),
    )
    dio.write_fit_report_json(fit, args.out)
    return EXIT_OK if fit.status == STATUS_CONVERGED else EXIT_NONCONVERGENCE


def cmd_fit_alpha(args) -> int:
    config = load_device_config(args.config)
    data = dio.read_backaction_csv(args.infile)
    g = config.coupling
    if args.g0_hz is not None:
        g = OptomechanicalCoupling(TWO_PI * args.g0_hz)
    p_d = data.get("dropped_power")
    if p_d is None:
        # reconstruct from the photon-number relation
        p_d = data["photon_number"] * hbar * config.optics.omega_o * config.optics.gamma_intrinsic
    fit = fit_alpha(
        data["detuning"],
        data["photon_number"],
        p_d,
        data["domega"],
        g,
        config.optics,
        config.mechanics,
        sigma=data.get("sigma"),
    )
    dio.write_fit_report_json(fit, args.out)
    return EXIT_OK if fit.status == STATUS_CONVERGED else EXIT_NONCONVERGENCE


def cmd_threshold(args) -> int:
    config = load_device_config(args.config)
    p_t = threshold_power(config.optics, config.mechanics, config.coupling)
    _emit({"threshold_power_w": p_t, "optimal_detuning_hz": config.mechanics.f_m}, args.out)
    return EXIT_OK


def cmd_calibrate_amplitude(args) -> int:
    config = load_device_config(args.config)
    x_th = thermal_amplitude(config.mechanics, args.temperature_k)
    x_om = calibrate_amplitude(args.area_om, args.area_th, args.p_th_w, args.p_om_w, x_th)
    _emit({"x_th_m": x_th, "x_om_m": x_om, "amplification": x_om / x_th}, args.out)
    return EXIT_OK


def cmd_spin(args) -> int:
    config = load_device_config(args.config)
    mech, spin = config.mechanics, config.spin
    payload = {
        "g_single_phonon_hz": single_phonon_coupling(mech, spin),
        "g_excited_state_hz": excited_state_coupling(mech, spin),
        "strain_zpm": mech.strain_zpm,
    }
    amplitude = args.amplitude_m if args.amplitude_m is not None else config.amplitude
    if amplitude is not None:
        payload["g_driven_hz"] = driven_coupling(mech, spin, amplitude)
        payload["amplitude_m"] = amplitude
    _emit(payload, args.out)
    return EXIT_OK


def cmd_survey(args) -> int:
    entries = dio.read_survey_csv(args.infile)
    ranked = dio.rank_survey(entries)
    if args.format == "json":
        payload = [
            {
                "rank": i + 1,
                "label": e.label,
                "material": e.material,
                "structure": e.structure,
                "qf_hz": e.qf_product,
                "environment": e.environment,
            }
            for i, e in enumerate(ranked)
        ]
        _emit({"survey": payload}, args.out)
    else:
        dio.write_survey_csv(ranked, args.out, ranked=True)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from diskmech.acceptance import run_selftest

    return run_selftest()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diskmech",
        description="Microdisk cavity optomechanics: forward models and inverse problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("report", cmd_report, help="figure-of-merit report for a device config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    for name, fn, needs_power in (
        ("transmission", cmd_transmission, False),
        ("bistable-sweep", cmd_bistable_sweep, True),
    ):
        p = add(name, fn, help=f"{name.replace('-', ' ')} over a wavelength grid")
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--span-pm", type=float, default=600.0)
        p.add_argument("--points", type=int, default=1001)
        p.add_argument("--scan-dir", choices=("up", "down"), default="up")
        p.add_argument("--power-w", type=float, required=needs_power, default=None if needs_power else 1e-6)

    p = add("fit-lineshape", cmd_fit_lineshape, help="fit a swept transmission trace")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=5)

    p = add("psd-synth", cmd_psd_synth, help="synthesize a detected noise spectrum")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--power-w", type=float, default=5e-5)
    p.add_argument("--detuning-hz", type=float, default=None)
    p.add_argument("--geff-hz", type=float, default=None)
    p.add_argument("--floor", type=float, default=0.0)
    p.add_argument("--noise-rel", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--temperature-k", type=float, default=295.0)

    p = add("fit-psd", cmd_fit_psd, help="Lorentzian fit of a spectrum CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("backaction-sweep", cmd_backaction_sweep, help="damping/spring shifts vs detuning")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--power-w", type=float, required=True)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--min-detuning-wm", type=float, default=0.1)
    p.add_argument("--max-detuning-wm", type=float, default=2.0)
    p.add_argument("--sigma-hz", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)

    p = add("fit-g0", cmd_fit_g0, help="extract g0 from a backaction sweep CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("fit-alpha", cmd_fit_alpha, help="extract static softening, g0 fixed")
    p.add_argument("--config", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--g0-hz", type=float, default=None)

    p = add("threshold", cmd_threshold, help="self-oscillation threshold power")
    p.add_argument("--config", required=True)
    p.add_argument("--out")

    p = add("calibrate-amplitude", cmd_calibrate_amplitude, help="area-ratio amplitude calibration")
    p.add_argument("--config", required=True)
    p.add_argument("--area-om", type=float, required=True)
    p.add_argument("--area-th", type=float, required=True)
    p.add_argument("--p-th-w", type=float, required=True)
    p.add_argument("--p-om-w", type=float, required=True)
    p.add_argument("--temperature-k", type=float, default=295.0)
    p.add_argument("--out")

    p = add("spin", cmd_spin, help="NV strain-coupling estimates")
    p.add_argument("--config", required=True)
    p.add_argument("--amplitude-m", type=float, default=None)
    p.add_argument("--out")

    p = add("survey", cmd_survey, help="rank a Q*f survey table")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    add("selftest", cmd_selftest, help="run the acceptance suite")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (FileNotFoundError, IsADirectoryError, PermissionError, json.JSONDecodeError, csv.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
