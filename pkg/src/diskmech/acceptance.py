"""Acceptance suite: every headline device number and property gate.

Each check is self-contained, deterministic, and prints one pass/fail line
through :func:`run_selftest`; the pytest suite drives the same registry.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import least_squares

from diskmech.backaction import (
    OperatingPoint,
    OptomechanicalCoupling,
    backaction_sweep,
    cooperativity,
    damping_shift,
    intrinsic_q_for_threshold,
    optical_spring_zero,
    threshold_power,
)
from diskmech.cavity import OpticalMode, dropped_power, intracavity_photons, transmission
from diskmech.fitting import (
    _lorentzian_initial_guess,
    fit_alpha,
    fit_bistable_lineshape,
    fit_g0,
    fit_lorentzian_psd,
    lorentzian_psd_model,
)
from diskmech.mechanics import MechanicalMode, qf_product, thermal_amplitude, thermal_occupancy
from diskmech.spectra import (
    SpectrumTrace,
    displacement_psd_model,
    langevin_oracle,
    lorentzian_sxx,
    lorentzian_variance,
    synthesize_sp,
    transduction_gain,
)
from diskmech.spin import SpinSusceptibility, driven_coupling, single_phonon_coupling
from diskmech.thermal import (
    DEFAULT_THERMO_OPTIC_A,
    bistable_sweep,
    extract_detuning,
    temperature_from_shift,
)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    detail: str


@dataclass(frozen=True)
class AcceptanceCheck:
    ident: str
    description: str
    fn: object

    def run(self) -> CheckResult:
        return self.fn()


def _mode_c() -> OpticalMode:
    return OpticalMode(lambda_o=1530e-9, q_intrinsic=6.4e4, q_loaded=6.0e4)


def _mech_c() -> MechanicalMode:
    return MechanicalMode(f_m=2.1e9, q_m=9000.0, m_eff=4.0e-14)


def _coupling() -> OptomechanicalCoupling:
    return OptomechanicalCoupling(g0=TWO_PI * 26e3)


def fit_fwhm_log(freq, psd, band_fwhm: float = 15.0) -> float:
    """Width of a floor-free Lorentzian line via a log-space band-limited fit.

    Log residuals keep the multiplicative periodogram noise homoscedastic,
    which is what the Langevin-oracle comparison needs; detector spectra with
    floors use the production fitter instead.
    """
    guess = _lorentzian_initial_guess(np.asarray(freq), np.asarray(psd))
    if guess is None:
        raise ValueError("no peak found")
    f0, w0, a0, _ = guess
    band = np.abs(freq - f0) < band_fwhm * w0
    f = np.asarray(freq)[band]
    y = np.asarray(psd)[band]
    keep = y > 0
    f, logy = f[keep], np.log(y[keep])
    scale = np.array([max(abs(f0), 1.0), w0, a0])

    def resid(z):
        model = lorentzian_psd_model(f, z[0] * scale[0], z[1] * scale[1], z[2] * scale[2], 0.0)
        return np.log(np.maximum(model, 1e-320)) - logy

    sol = least_squares(resid, np.array([f0, w0, a0]) / scale, method="lm", xtol=1e-13, ftol=1e-13)
    return float(abs(sol.x[1] * scale[1]))


# ----------------------------------------------------------------- criteria

def check_photon_number() -> CheckResult:
    mode = OpticalMode(1530e-9, 6.4e4, 5.9e4)
    n = intracavity_photons(1.5e-3, mode)
    rel = abs(n - 6.5e5) / 6.5e5
    return CheckResult(rel <= 0.15, f"N(P_d=1.5 mW) = {n:.3g}, vs 6.5e5 rel dev {rel:.1%} (<= 15%)")


def check_cooperativity() -> CheckResult:
    mech = MechanicalMode(f_m=2.0e9, q_m=9000.0, m_eff=4.0e-14)
    op = OperatingPoint(detuning=0.0, photon_number=2.8e6)
    c = cooperativity(op, _coupling(), _mode_c(), mech)
    rel = abs(c - 2.7) / 2.7
    return CheckResult(rel <= 0.15, f"C = {c:.3f}, vs 2.7 rel dev {rel:.1%} (<= 15%)")


def check_amplitudes() -> CheckResult:
    mech = MechanicalMode(f_m=2.0e9, q_m=9000.0, m_eff=4.0e-14)
    x_th = thermal_amplitude(mech, 295.0)
    x_zpm = mech.x_zpm
    ok_th = 24e-15 <= x_th <= 25.5e-15
    ok_zpm = abs(x_zpm - 0.32e-15) / 0.32e-15 <= 0.03
    return CheckResult(
        ok_th and ok_zpm,
        f"x_th = {x_th * 1e15:.2f} fm (in [24, 25.5]), x_zpm = {x_zpm * 1e15:.3f} fm (0.32 +- 3%)",
    )


def check_temperature_rise() -> CheckResult:
    dt = temperature_from_shift(400e-12, 1530e-9, DEFAULT_THERMO_OPTIC_A)
    return CheckResult(abs(dt - 50.0) <= 5.0, f"dT(400 pm) = {dt:.2f} K (50 +- 10%)")


def check_threshold() -> CheckResult:
    p_t = threshold_power(_mode_c(), _mech_c(), _coupling())
    rel = abs(p_t - 760e-6) / 760e-6
    mode_d = OpticalMode(1530e-9, 4.0e4, 4.0e4)
    mech_d = MechanicalMode(f_m=2.1e9, q_m=8000.0, m_eff=4.0e-14)
    q_i = intrinsic_q_for_threshold(3.0e-3, mode_d, mech_d, _coupling())
    ok_d = 1e4 <= q_i <= 1e5
    return CheckResult(
        rel <= 0.15 and ok_d,
        f"P_T(c) = {p_t * 1e6:.0f} uW vs 760 uW ({rel:.1%} <= 15%); "
        f"device (d) implied Q_i = {q_i:.3g} in [1e4, 1e5]",
    )


def _g0_sweep():
    mode, mech, g = _mode_c(), _mech_c(), _coupling()
    p_i = 1.5e-3 / (1.0 - transmission(0.0, mode))
    det = np.linspace(0.1, 2.0, 20) * mech.omega_m
    sweep = backaction_sweep(det, mode, mech, g, p_i)
    return mode, mech, g, det, sweep


def check_g0_round_trip() -> CheckResult:
    mode, mech, g, det, sweep = _g0_sweep()
    sigma = TWO_PI * 40e3
    sig = np.full(det.size, sigma)
    rng = np.random.default_rng(2026)
    fit0 = None
    covered = 0
    for rep in range(100):
        noisy = sweep["dgamma"] + sigma * rng.standard_normal(det.size)
        fit = fit_g0(det, sweep["photon_number"], noisy, mode, mech, sigma=sig)
        if rep == 0:
            fit0 = fit
        if abs(fit.params["g0"] - g.g0) <= fit.ci95["g0"]:
            covered += 1
    g0_khz = fit0.params["g0"] / TWO_PI / 1e3
    ci_khz = fit0.ci95["g0"] / TWO_PI / 1e3
    ok = abs(g0_khz - 26.0) <= 2.0 and covered >= 90
    return CheckResult(
        ok,
        f"fitted g0/2pi = {g0_khz:.2f} +- {ci_khz:.2f} kHz (26 +- 2); CI coverage {covered}/100 (>= 90)",
    )


def check_spring_model() -> CheckResult:
    mode, mech, g = _mode_c(), _mech_c(), _coupling()
    alpha_true = -TWO_PI * 2.5e8
    p_i = 1.5e-3 / (1.0 - transmission(0.0, mode))
    det = np.linspace(0.1, 2.0, 25) * mech.omega_m
    sweep = backaction_sweep(det, mode, mech, g, p_i, alpha=alpha_true)
    p_d = dropped_power(transmission(det, mode), p_i)
    rng = np.random.default_rng(7)
    noisy = sweep["domega"] + TWO_PI * 5e3 * rng.standard_normal(det.size)
    fit = fit_alpha(det, sweep["photon_number"], p_d, noisy, g, mode, mech)
    alpha_hat = fit.params["alpha"]
    model = backaction_sweep(det, mode, mech, g, p_i, alpha=alpha_hat)
    softening = -model["domega"].min()
    kink = optical_spring_zero(mode, mech)
    ok = (
        softening > TWO_PI * 300e3
        and 0.0 < kink < mech.omega_m
        and abs(alpha_hat - alpha_true) / abs(alpha_true) <= 0.10
    )
    return CheckResult(
        ok,
        f"max softening {softening / TWO_PI / 1e3:.0f} kHz (> 300), spring sign change at "
        f"{kink / mech.omega_m:.2f} omega_m, alpha within {abs(alpha_hat / alpha_true - 1):.1%} of truth",
    )


def check_spin_chain() -> CheckResult:
    mech_base = _mech_c()
    mech = MechanicalMode(
        f_m=mech_base.f_m,
        q_m=mech_base.q_m,
        m_eff=mech_base.m_eff,
        strain_per_meter=3e-10 / mech_base.x_zpm,
    )
    spin = SpinSusceptibility(ground_state_d=20e9)
    g_e = single_phonon_coupling(mech, spin)
    ok_e = abs(g_e - 6.0) <= 1e-9
    g_drv = driven_coupling(mech, spin, 31e-12)
    ok_drv = abs(g_drv - 0.6e6) / 0.6e6 <= 0.10
    return CheckResult(
        ok_e and ok_drv,
        f"g_e = {g_e:.6f} Hz (6 exactly); G(31 pm) = {g_drv / 1e6:.3f} MHz (0.6 +- 10%)",
    )


def check_qf_coherence() -> CheckResult:
    mech = _mech_c()
    qf = qf_product(mech)
    n_th = thermal_occupancy(mech, 295.0)
    ok = abs(qf - 1.89e13) / 1.89e13 <= 0.01 and mech.q_m > n_th
    return CheckResult(ok, f"Q*f = {qf:.4g} Hz (1.89e13 +- 1%); Q_m = {mech.q_m:.0f} > n_th = {n_th:.0f}")


def psd_area_quad(mech: MechanicalMode, gamma_eff: float, omega_eff: float, temperature: float) -> float:
    """Adaptive quadrature of the oscillator PSD over its full support.

    Works in the resonance-scaled variable x = (w - w_eff)/gamma_eff with
    decade-spaced segments, since the line is a needle on the raw axis; the
    residual truncation beyond |x| = 1e6 is well under the 0.1% gate.
    """

    def g(x):
        return displacement_psd_model(omega_eff + gamma_eff * x, mech, gamma_eff, omega_eff, temperature)

    mags = [10.0, 50.0, 100.0, 1e3, 1e4, 1e5, 1e6]
    edges = [-m for m in reversed(mags)] + [0.0] + mags
    edges = [max(x, -omega_eff / gamma_eff) for x in edges]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            total += quad(g, a, b, limit=200)[0]
    return gamma_eff * total / TWO_PI


def check_equipartition_quadrature() -> CheckResult:
    mech = _mech_c()
    temperature = 295.0
    worst = 0.0
    for ratio in (1.0, 0.5):
        gamma_eff = ratio * mech.gamma_m
        total = psd_area_quad(mech, gamma_eff, mech.omega_m, temperature)
        rel = abs(total / lorentzian_variance(mech, gamma_eff, mech.omega_m, temperature) - 1.0)
        worst = max(worst, rel)
    return CheckResult(worst <= 1e-3, f"quadrature vs closed-form area: worst rel dev {worst:.2e} (<= 1e-3)")


def check_damping_antisymmetry() -> CheckResult:
    mode, mech, g = _mode_c(), _mech_c(), _coupling()
    det = np.linspace(0.05, 3.0, 57) * mech.omega_m
    op_pos = [OperatingPoint(d, 1e5) for d in det]
    op_neg = [OperatingPoint(-d, 1e5) for d in det]
    worst = max(
        abs(damping_shift(p, g, mode, mech) + damping_shift(n, g, mode, mech))
        for p, n in zip(op_pos, op_neg)
    )
    return CheckResult(worst == 0.0, f"max |dgamma(D) + dgamma(-D)| = {worst:g} (exact 0)")


def check_transduction_null() -> CheckResult:
    mode = OpticalMode(1530e-9, 6.4e4, 5.9e4)
    omega = TWO_PI * 2.1e9
    h0 = transduction_gain(omega, OperatingPoint(0.0), mode)
    href = transduction_gain(omega, OperatingPoint(0.5 * mode.gamma_loaded), mode)
    ok = h0 <= 1e-20 * href
    return CheckResult(ok, f"H(w, 0) = {h0:.3g} vs H(w, gamma/2) = {href:.3g} (ratio <= 1e-20)")


def check_bistable_round_trip() -> CheckResult:
    mode = OpticalMode(1530e-9, 6.4e4, 5.9e4)
    t_min = transmission(0.0, mode)
    d = 400e-12 / (1.0 - t_min)
    lam = np.linspace(mode.lambda_o - 0.15e-9, mode.lambda_o + 0.7e-9, 1200)
    up = bistable_sweep(lam, 6e-3, "up", mode, d)
    det = extract_detuning(up, mode.lambda_o, d)
    rms = float(np.sqrt(np.mean((transmission(det, mode) - up.transmission) ** 2)))
    shift_max = d * (1.0 - up.transmission.min())
    ok = rms <= 0.01 and abs(shift_max - 400e-12) / 400e-12 <= 0.02
    return CheckResult(
        ok, f"round-trip RMS {rms:.2e} (<= 1e-2); max thermal shift {shift_max * 1e12:.1f} pm (400 +- 2%)"
    )


def check_langevin_oracle() -> CheckResult:
    mech = MechanicalMode(f_m=50e6, q_m=500.0, m_eff=4.0e-14)
    temperature = 295.0
    details = []
    ok = True
    for ratio in (0.25, 1.0, 4.0):
        gamma_eff = ratio * mech.gamma_m
        duration = 200.0 * TWO_PI / gamma_eff  # 200 linewidth-times, linewidth in Hz
        psd = langevin_oracle(mech, gamma_eff, temperature, duration, seed=5)
        area_rel = abs(psd.variance() / lorentzian_variance(mech, gamma_eff, mech.omega_m, temperature) - 1.0)
        fwhm = fit_fwhm_log(psd.omega / TWO_PI, psd.s_xx)
        fwhm_rel = abs(fwhm / (gamma_eff / TWO_PI) - 1.0)
        ok = ok and area_rel <= 0.05 and fwhm_rel <= 0.05
        details.append(f"geff/gm={ratio:g}: area {area_rel:.1%}, fwhm {fwhm_rel:.1%}")
    return CheckResult(ok, "; ".join(details) + " (each <= 5%)")


def check_fit_round_trips() -> CheckResult:
    mode, mech, g = _mode_c(), _mech_c(), _coupling()
    notes = []
    ok = True

    # noiseless Lorentzian: exact recovery
    freq = np.linspace(2.05e9, 2.15e9, 600)
    truth = dict(f0=2.1e9, fwhm=230e3, area=3.2e-12, floor=2.2e-19)
    trace = SpectrumTrace(freq, lorentzian_psd_model(freq, **truth))
    fit = fit_lorentzian_psd(trace)
    worst = max(abs(fit.params[k] / truth[k] - 1.0) for k in ("f0", "fwhm", "area", "floor"))
    ok &= worst <= 1e-6
    notes.append(f"noiseless Lorentzian rel {worst:.1e}")

    # noisy PSD mimicking a thermal RBM trace: fitted Q within 5%
    op = OperatingPoint(0.5 * mode.gamma_loaded)
    sxx = lorentzian_sxx(mech, mech.gamma_m, mech.omega_m, 295.0, span_linewidths=30.0, n_points=1200)
    signal = synthesize_sp(sxx, op, mode, g, mech, 5e-5)
    floor = 0.1 * signal.psd.max()
    noisy = synthesize_sp(sxx, op, mode, g, mech, 5e-5, noise_floor=floor, noise_rel=0.08, seed=11)
    fitq = fit_lorentzian_psd(noisy)
    q_fit = fitq.params["f0"] / fitq.params["fwhm"]
    ok &= abs(q_fit / mech.q_m - 1.0) <= 0.05
    notes.append(f"noisy PSD Q rel {abs(q_fit / mech.q_m - 1):.1%}")

    # single exact point -> exact g0
    op1 = OperatingPoint(mech.omega_m, 6.5e5)
    fit1 = fit_g0(
        np.array([mech.omega_m]),
        np.array([6.5e5]),
        np.array([float(damping_shift(op1, g, mode, mech))]),
        mode,
        mech,
    )
    ok &= abs(fit1.params["g0"] / g.g0 - 1.0) <= 1e-9
    notes.append(f"g0 single-point rel {abs(fit1.params['g0'] / g.g0 - 1):.1e}")

    # alpha generator round trip within 3%
    alpha_true = -TWO_PI * 2.5e8
    p_i = 1.5e-3 / (1.0 - transmission(0.0, mode))
    det = np.linspace(0.1, 2.0, 25) * mech.omega_m
    sweep = backaction_sweep(det, mode, mech, g, p_i, alpha=alpha_true)
    p_d = dropped_power(transmission(det, mode), p_i)
    rng = np.random.default_rng(3)
    fit_a = fit_alpha(
        det,
        sweep["photon_number"],
        p_d,
        sweep["domega"] + TWO_PI * 4e3 * rng.standard_normal(det.size),
        g,
        mode,
        mech,
    )
    ok &= abs(fit_a.params["alpha"] / alpha_true - 1.0) <= 0.03
    notes.append(f"alpha rel {abs(fit_a.params['alpha'] / alpha_true - 1):.1%}")

    # bistable lineshape fits
    lam = np.linspace(mode.lambda_o - 0.12e-9, mode.lambda_o + 0.12e-9, 240)
    cold = bistable_sweep(lam, 1e-6, "up", mode, 0.0)
    fit_c = fit_bistable_lineshape(cold, seed=0)
    ok &= abs(fit_c.params["q_intrinsic"] / mode.q_intrinsic - 1.0) <= 0.01
    q_ex_true = mode.omega_o / mode.gamma_external
    ok &= abs(fit_c.params["q_external"] / q_ex_true - 1.0) <= 0.01
    notes.append(
        f"cold fit Qi rel {abs(fit_c.params['q_intrinsic'] / mode.q_intrinsic - 1):.2%}, "
        f"Qex rel {abs(fit_c.params['q_external'] / q_ex_true - 1):.2%}"
    )

    d_true = 3.0 * mode.linewidth_wavelength
    lam2 = np.linspace(mode.lambda_o - 0.1e-9, mode.lambda_o + 0.25e-9, 280)
    fin = bistable_sweep(lam2, 1e-3, "up", mode, d_true)
    fit_f = fit_bistable_lineshape(fin, seed=1)
    lam_err = abs(fit_f.params["lambda_o"] - mode.lambda_o) / mode.linewidth_wavelength
    d_err = abs(fit_f.params["d"] / d_true - 1.0)
    ok &= lam_err <= 0.02 and d_err <= 0.02
    notes.append(f"shark-fin lambda_o err {lam_err:.3f} lw, d rel {d_err:.2%}")

    split_true = TWO_PI * 2.5e9
    mode_dbl = OpticalMode(mode.lambda_o, mode.q_intrinsic, mode.q_loaded, split_true)
    lam3 = np.linspace(mode.lambda_o - 0.15e-9, mode.lambda_o + 0.15e-9, 280)
    dbl = bistable_sweep(lam3, 1e-6, "up", mode_dbl, 0.0)
    fit_d = fit_bistable_lineshape(dbl, seed=2)
    split_err = abs(fit_d.params["splitting"] / split_true - 1.0)
    ok &= split_err <= 0.05
    notes.append(f"doublet splitting rel {split_err:.2%}")

    return CheckResult(bool(ok), "; ".join(notes))


CHECKS = [
    AcceptanceCheck("1-photon-number", "intracavity photons at P_d = 1.5 mW", check_photon_number),
    AcceptanceCheck("2-cooperativity", "C at N = 2.8e6", check_cooperativity),
    AcceptanceCheck("3-amplitudes", "thermal and zero-point amplitudes", check_amplitudes),
    AcceptanceCheck("4-temperature-rise", "dT from a 400 pm shift", check_temperature_rise),
    AcceptanceCheck("5-threshold", "self-oscillation threshold, both devices", check_threshold),
    AcceptanceCheck("6-g0-round-trip", "g0 recovery and CI coverage", check_g0_round_trip),
    AcceptanceCheck("7-spring-model", "softening magnitude and spring kink", check_spring_model),
    AcceptanceCheck("8-spin-chain", "single-phonon and driven spin coupling", check_spin_chain),
    AcceptanceCheck("9-qf-coherence", "Q*f product and coherence margin", check_qf_coherence),
    AcceptanceCheck("10a-equipartition", "PSD quadrature equals closed form", check_equipartition_quadrature),
    AcceptanceCheck("10b-antisymmetry", "damping shift antisymmetry, exact", check_damping_antisymmetry),
    AcceptanceCheck("10c-transduction-null", "H(w, 0) at machine precision", check_transduction_null),
    AcceptanceCheck("10d-bistable-round-trip", "sweep + detuning extraction", check_bistable_round_trip),
    AcceptanceCheck("10e-langevin-oracle", "time-domain vs analytic PSD", check_langevin_oracle),
    AcceptanceCheck("10f-fit-round-trips", "all fit generators recover truth", check_fit_round_trips),
]


def run_selftest(stream=None) -> int:
    """Run every acceptance check, print one line per criterion.

    Returns a nonzero exit status iff any check fails.
    """
    stream = stream or sys.stdout
    failures = 0
    for check in CHECKS:
        try:
            result = check.run()
        except Exception as exc:  # a crashed check is a failed check
            result = CheckResult(False, f"raised {type(exc).__name__}: {exc}")
        tag = "PASS" if result.passed else "FAIL"
        stream.write(f"[{tag}] {check.ident}: {result.detail}\n")
        failures += 0 if result.passed else 1
    stream.write(f"{len(CHECKS) - failures}/{len(CHECKS)} acceptance checks passed\n")
    return 1 if failures else 0
