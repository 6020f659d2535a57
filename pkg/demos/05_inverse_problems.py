"""Inverse problems: extract g0, the thermal softening, and lineshape params.

Generates realistic synthetic datasets and runs the three fitters the real
measurement chain would use: a closed-form weighted fit for g0 from damping
data, a fixed-g0 regression for the static softening, and a multi-start
simplex fit of the (possibly bistable) transmission lineshape.
"""

import os

import numpy as np

from diskmech import (
    MechanicalMode,
    OpticalMode,
    OptomechanicalCoupling,
    backaction_sweep,
    bistable_sweep,
    dropped_power,
    fit_alpha,
    fit_bistable_lineshape,
    fit_g0,
    transmission,
)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

mode = OpticalMode(lambda_o=1530e-9, q_intrinsic=6.4e4, q_loaded=6.0e4)
mech = MechanicalMode(f_m=2.1e9, q_m=9000, m_eff=4.0e-14)
g_true = OptomechanicalCoupling(g0=2 * np.pi * 26e3)
alpha_true = -2 * np.pi * 2.5e8

rng = np.random.default_rng(0)
p_i = 1.5e-3 / (1 - transmission(0.0, mode))
det = np.linspace(0.1, 2.0, 20) * mech.omega_m
sweep = backaction_sweep(det, mode, mech, g_true, p_i, alpha=alpha_true)
p_d = dropped_power(transmission(det, mode), p_i)

print("== g0 from the damping data, one free parameter ==")
sigma = 2 * np.pi * 40e3
noisy_dg = sweep["dgamma"] + sigma * rng.standard_normal(det.size)
fit = fit_g0(det, sweep["photon_number"], noisy_dg, mode, mech, sigma=np.full(det.size, sigma))
print(f"g0/2pi = {fit.params['g0'] / 2 / np.pi / 1e3:.1f} +- "
      f"{fit.ci95['g0'] / 2 / np.pi / 1e3:.1f} kHz   (truth: 26.0)")

print("\n== static softening with g0 held fixed ==")
noisy_dw = sweep["domega"] + 2 * np.pi * 5e3 * rng.standard_normal(det.size)
fit_a = fit_alpha(det, sweep["photon_number"], p_d, noisy_dw, g_true, mode, mech)
print(f"alpha/2pi = {fit_a.params['alpha'] / 2 / np.pi / 1e6:.1f} +- "
      f"{fit_a.ci95['alpha'] / 2 / np.pi / 1e6:.1f} MHz/W   (truth: {alpha_true / 2 / np.pi / 1e6:.1f})")

print("\n== bistable lineshape fit (lambda_o, Q_i, Q_ex, d, splitting) ==")
d_true = 3.0 * mode.linewidth_wavelength
lam = np.linspace(mode.lambda_o - 0.1e-9, mode.lambda_o + 0.25e-9, 280)
trace = bistable_sweep(lam, 1e-3, "up", mode, d_true)
fit_b = fit_bistable_lineshape(trace, seed=1)
print(f"status {fit_b.status}, residual RMS {fit_b.residual_rms:.2e}")
for name in ("lambda_o", "q_intrinsic", "q_external", "d", "splitting"):
    print(f"  {name:12s} = {fit_b.params[name]:.6g} {fit_b.units[name]}")
print(f"  (true d = {d_true:.6g} m, true lambda_o = {mode.lambda_o:.6g} m)")
