"""Cold-cavity transmission and intracavity photon number.

Sweeps a probe across a fiber-loaded microdisk mode, compares singlet and
backscattering-doublet lineshapes, and converts dropped power into the
steady-state photon number that drives everything else.
"""

import os

import numpy as np

from diskmech import (
    OpticalMode,
    SweepTrace,
    dropped_power,
    intracavity_photons,
    transmission,
)
from diskmech.io import write_sweep_csv

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

singlet = OpticalMode(lambda_o=1530e-9, q_intrinsic=6.4e4, q_loaded=5.9e4)
doublet = OpticalMode(lambda_o=1530e-9, q_intrinsic=6.4e4, q_loaded=5.9e4,
                      doublet_splitting=2 * np.pi * 8e9)

print("== fiber-coupled microdisk at 1530 nm ==")
print(f"loaded Q        : {singlet.q_loaded:.3g}")
print(f"linewidth       : {singlet.gamma_loaded / 2 / np.pi / 1e9:.2f} GHz "
      f"({singlet.linewidth_wavelength * 1e12:.1f} pm)")
print(f"on-resonance T  : {transmission(0.0, singlet):.3f}")

lam = np.linspace(singlet.lambda_o - 0.2e-9, singlet.lambda_o + 0.2e-9, 2001)
for name, mode in (("singlet", singlet), ("doublet", doublet)):
    t_bar = transmission(mode.detuning_from_wavelength(lam), mode)
    trace = SweepTrace(lam, t_bar, input_power=50e-6)
    write_sweep_csv(trace, os.path.join(OUT, f"transmission_{name}.csv"))
    print(f"{name}: min T = {t_bar.min():.3f}, written to output/transmission_{name}.csv")

print("\n== dropped power -> photon number ==")
for p_d in (1.5e-3, 13e-3):
    n = intracavity_photons(p_d, singlet)
    print(f"P_d = {p_d * 1e3:5.1f} mW  ->  N = {n:.3g}")

p_i = 6.4e-3
t0 = transmission(0.0, singlet)
print(f"\nat P_i = {p_i * 1e3:.1f} mW on resonance: P_d = {dropped_power(t0, p_i) * 1e3:.2f} mW, "
      f"N = {intracavity_photons(dropped_power(t0, p_i), singlet):.3g}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    for name, mode in (("singlet", singlet), ("doublet", doublet)):
        ax.plot(lam * 1e9, transmission(mode.detuning_from_wavelength(lam), mode), label=name)
    ax.set_xlabel("wavelength (nm)")
    ax.set_ylabel("normalized transmission")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(OUT, "transmission.png"), dpi=150)
    print("plot saved to output/transmission.png")
except ImportError:
    print("matplotlib not available; skipped plot")
