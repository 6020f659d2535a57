"""Photodetected noise spectra: synthesis, normalization, amplitude calibration.

Thermal motion phase-modulates the cavity; direct detection converts it into
a Lorentzian line on the photocurrent spectrum through the two-sideband
transfer function.  Power-normalized areas then calibrate the self-oscillation
amplitude against the known thermal reference, and a time-domain Langevin
simulation independently confirms the analytic spectrum.
"""

import os

import numpy as np

from diskmech import (
    MechanicalMode,
    OperatingPoint,
    OpticalMode,
    OptomechanicalCoupling,
    calibrate_amplitude,
    langevin_oracle,
    lorentzian_sxx,
    normalize_sp,
    synthesize_sp,
    thermal_amplitude,
    transduction_gain,
)
from diskmech.io import write_spectrum_csv
from diskmech.spectra import lorentzian_variance

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

mode = OpticalMode(lambda_o=1530e-9, q_intrinsic=6.4e4, q_loaded=5.9e4)
mech = MechanicalMode(f_m=2.1e9, q_m=9000, m_eff=4.0e-14)
g = OptomechanicalCoupling(g0=2 * np.pi * 26e3)

x_th = thermal_amplitude(mech, 295.0)
print(f"thermal amplitude x_th = {x_th * 1e15:.1f} fm, zero-point x_zpm = {mech.x_zpm * 1e15:.2f} fm")

# where does the cavity transduce best?
omega = mech.omega_m
det_grid = np.linspace(0.01, 2.0, 300) * omega
gains = [transduction_gain(omega, OperatingPoint(d), mode) for d in det_grid]
d_opt = det_grid[int(np.argmax(gains))]
print(f"transduction optimum at Delta = {d_opt / mode.gamma_loaded:.2f} linewidths "
      f"(H vanishes exactly on resonance)")

op = OperatingPoint(d_opt)
sxx = lorentzian_sxx(mech, mech.gamma_m, mech.omega_m, 295.0)
trace = synthesize_sp(sxx, op, mode, g, mech, input_power=50e-6, noise_rel=0.05, seed=1)
write_spectrum_csv(trace, os.path.join(OUT, "thermal_psd.csv"))
print(f"thermal spectrum written (peak at {trace.freq[np.argmax(trace.psd)] / 1e9:.3f} GHz)")

# normalized areas are power-independent without backaction
ref = 50e-6
areas = []
for seed, p_i in enumerate((20e-6, 80e-6, 320e-6), start=2):
    t = synthesize_sp(sxx, op, mode, g, mech, input_power=p_i, noise_rel=0.02, seed=seed)
    areas.append(normalize_sp(t, ref).area())
spread = np.ptp(areas) / np.mean(areas)
print(f"normalized-area spread across a 16x power family: {spread:.2%}")

# area-ratio calibration of the self-oscillation amplitude
factor = (31e-12 / x_th) ** 2
x_om = calibrate_amplitude(factor * 1.0, 1.0, p_thermal=ref, p_driven=ref, x_th=x_th)
print(f"area amplification {factor:.3g} calibrates to x_om = {x_om * 1e12:.0f} pm "
      f"(~ x_th * 10^3)")

# independent oracle: integrate the Langevin dynamics and compare
scaled = MechanicalMode(f_m=50e6, q_m=500, m_eff=4.0e-14)
duration = 200 * 2 * np.pi / scaled.gamma_m
psd = langevin_oracle(scaled, scaled.gamma_m, 295.0, duration, seed=5)
area_rel = psd.variance() / lorentzian_variance(scaled, scaled.gamma_m, scaled.omega_m, 295.0) - 1
print(f"\nLangevin oracle vs analytic area (200 linewidth-times of data): {area_rel:+.2%}")
