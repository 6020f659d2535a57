"""Photodetected mechanical noise spectra: synthesis and calibration.

Displacement PSDs of the thermally driven (possibly backaction-modified)
oscillator, the cavity transduction transfer function for direct detection,
detected-spectrum synthesis and power normalization, area-based amplitude
calibration, and a time-domain Langevin oracle for independent verification.

Detector units of S_P are arbitrary but fixed per trace; all physics
conclusions are drawn from ratios, never absolute S_P.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import k as k_B
from scipy.linalg import cholesky, expm
from scipy.signal import lfilter, welch

from diskmech.backaction import OperatingPoint, OptomechanicalCoupling
from diskmech.cavity import OpticalMode, _lorentzian_response, transmission_amplitude
from diskmech.mechanics import MechanicalMode


@dataclass
class SpectrumTrace:
    """Sampled detected power spectral density vs frequency (Hz).

    Metadata carries the acquisition context: input power (W), detuning
    (rad/s), resolution bandwidth (Hz), and an optional noise seed.
    """

    freq: np.ndarray
    psd: np.ndarray
    input_power: float | None = None
    detuning: float | None = None
    rbw: float | None = None
    seed: int | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.freq = np.asarray(self.freq, dtype=float)
        self.psd = np.asarray(self.psd, dtype=float)
        if self.freq.shape != self.psd.shape or self.freq.ndim != 1:
            raise ValueError("freq and psd must be 1-d arrays of equal length")
        if not np.all(np.diff(self.freq) > 0):
            raise ValueError("frequency grid must be strictly increasing")
        if np.any(self.psd < 0):
            raise ValueError("psd must be >= 0")

    def area(self) -> float:
        """Trapezoidal area under the trace (units of psd * Hz)."""
        return float(np.trapezoid(self.psd, self.freq))

    def __len__(self) -> int:
        return self.freq.size


@dataclass
class DisplacementPSD:
    """Single-sided displacement spectral density on an angular grid.

    The variance is the integral of s_xx over omega / (2 pi); numerically the
    s_xx values coincide with a per-Hz density sampled at f = omega / (2 pi).
    """

    omega: np.ndarray
    s_xx: np.ndarray

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=float)
        self.s_xx = np.asarray(self.s_xx, dtype=float)
        if self.omega.shape != self.s_xx.shape or self.omega.ndim != 1:
            raise ValueError("omega and s_xx must be 1-d arrays of equal length")
        if not np.all(np.diff(self.omega) > 0):
            raise ValueError("omega grid must be strictly increasing")
        if np.any(self.s_xx < 0):
            raise ValueError("s_xx must be >= 0")

    def variance(self) -> float:
        """<x^2> from the sampled grid (m^2)."""
        return float(np.trapezoid(self.s_xx, self.omega) / (2.0 * np.pi))


def displacement_psd_model(
    omega,
    mech: MechanicalMode,
    gamma_eff: float,
    omega_eff: float,
    temperature: float,
):
    """Closed-form thermal oscillator PSD (single-sided, angular argument).

    S_xx(w) = (4 k_B T gamma_m / m_eff) / [(w_eff^2 - w^2)^2 + (gamma_eff w)^2]

    The thermal force is pinned to the bath rate gamma_m even when backaction
    changes the susceptibility to gamma_eff, so anti-damping amplifies the
    area: integral = (k_B T / m_eff w_eff^2) * (gamma_m / gamma_eff).
    """
    omega = np.asarray(omega, dtype=float)
    num = 4.0 * k_B * temperature * mech.gamma_m / mech.m_eff
    denom = (omega_eff**2 - omega**2) ** 2 + (gamma_eff * omega) ** 2
    out = num / denom
    return out if out.ndim else float(out)


def lorentzian_variance(
    mech: MechanicalMode, gamma_eff: float, omega_eff: float, temperature: float
) -> float:
    """Closed-form area of :func:`displacement_psd_model` (m^2)."""
    return (k_B * temperature / (mech.m_eff * omega_eff**2)) * (mech.gamma_m / gamma_eff)


def lorentzian_sxx(
    mech: MechanicalMode,
    gamma_eff: float,
    omega_eff: float,
    temperature: float,
    omega=None,
    span_linewidths: float = 50.0,
    n_points: int = 4001,
) -> DisplacementPSD:
    """Sampled displacement PSD of the (backaction-modified) thermal mode.

    gamma_eff must be positive: at or past the self-oscillation point the
    linear spectrum diverges and the Langevin oracle or a self-oscillation
    report should be used instead.
    """
    if gamma_eff <= 0:
        raise ValueError("gamma_eff must be > 0 (below the self-oscillation threshold)")
    if omega is None:
        lo = max(omega_eff - span_linewidths * gamma_eff, 0.0)
        hi = omega_eff + span_linewidths * gamma_eff
        omega = np.linspace(lo, hi, n_points)
    omega = np.asarray(omega, dtype=float)
    return DisplacementPSD(omega, displacement_psd_model(omega, mech, gamma_eff, omega_eff, temperature))


def transduction_gain(omega, op: OperatingPoint, mode: OpticalMode):
    """Direct-detection transfer function H(omega, detuning) = |K|^2.

    K is the first-order two-sideband response of the transmitted power to a
    cavity-frequency modulation at omega:

        K = gamma_ex * [t*(D) L(D+w) L(D) - t(D) (L(D-w) L(D))*]

    with L(d) = 1/(i d + gamma_t/2) and t the singlet transmission amplitude.
    On resonance the sidebands interfere destructively and H vanishes; H is
    even in the detuning.  Only the singlet response is modeled.
    """
    omega = np.asarray(omega, dtype=float)
    delta = op.detuning
    g_t = mode.gamma_loaded
    g_ex = mode.gamma_external
    singlet = OpticalMode(mode.lambda_o, mode.q_intrinsic, mode.q_loaded)
    t = transmission_amplitude(delta, singlet)
    l_0 = _lorentzian_response(delta, g_t)
    k = g_ex * (
        np.conj(t) * _lorentzian_response(delta + omega, g_t) * l_0
        - t * np.conj(_lorentzian_response(delta - omega, g_t) * l_0)
    )
    out = np.abs(k) ** 2
    return out if out.ndim else float(out)


def synthesize_sp(
    sxx: DisplacementPSD,
    op: OperatingPoint,
    mode: OpticalMode,
    g: OptomechanicalCoupling,
    mech: MechanicalMode,
    input_power: float,
    noise_floor=0.0,
    noise_rel: float = 0.0,
    seed: int | None = None,
) -> SpectrumTrace:
    """Detected power PSD: S_P = g_om^2 P_i^2 S_xx(w) H(w, D) + floor.

    ``noise_floor`` may be a scalar or an array on the same grid; a grid
    mismatch is rejected.  ``noise_rel`` adds seeded multiplicative Gaussian
    noise (fractional), for synthetic-data round trips.
    """
    if input_power < 0:
        raise ValueError("input_power must be >= 0")
    floor = np.asarray(noise_floor, dtype=float)
    if floor.ndim not in (0, 1):
        raise ValueError("noise_floor must be scalar or 1-d")
    if floor.ndim == 1 and floor.shape != sxx.omega.shape:
        raise ValueError("noise_floor grid does not match the displacement PSD grid")
    g_om = g.g_om(mech)
    h = transduction_gain(sxx.omega, op, mode)
    signal = g_om**2 * input_power**2 * sxx.s_xx * h
    psd = signal + floor
    if noise_rel > 0.0:
        rng = np.random.default_rng(seed)
        psd = psd * (1.0 + noise_rel * rng.standard_normal(psd.shape))
    psd = np.clip(psd, 0.0, None)
    freq = sxx.omega / (2.0 * np.pi)
    rbw = float(freq[1] - freq[0]) if freq.size > 1 else None
    return SpectrumTrace(freq, psd, input_power=input_power, detuning=op.detuning, rbw=rbw, seed=seed)


def normalize_sp(trace: SpectrumTrace, reference_power: float) -> SpectrumTrace:
    """Rescale a detected spectrum to a reference input power at fixed detuning.

    The transduction gain grows as P_i^2, so dividing it out makes the area
    track the mechanical energy: S~_P = S_P * (P_ref / P_i)^2.  Holding the
    detuning fixed between traces is the caller's responsibility and is
    flagged in the output metadata.
    """
    if trace.input_power is None or trace.input_power <= 0:
        raise ValueError("trace must carry a positive input_power to normalize")
    if reference_power <= 0:
        raise ValueError("reference_power must be > 0")
    scale = (reference_power / trace.input_power) ** 2
    meta = dict(trace.metadata)
    meta.update({"normalized": True, "reference_power_w": reference_power,
                 "fixed_detuning_assumed": True})
    return SpectrumTrace(
        trace.freq.copy(),
        trace.psd * scale,
        input_power=trace.input_power,
        detuning=trace.detuning,
        rbw=trace.rbw,
        seed=trace.seed,
        metadata=meta,
    )


def calibrate_amplitude(
    area_driven: float,
    area_thermal: float,
    p_thermal: float,
    p_driven: float,
    x_th: float,
) -> float:
    """Self-oscillation amplitude from detected-spectrum areas.

    x_om = x_th * sqrt((A_om / A_th) * (P_th^2 / P_om^2)); the thermal
    reference trace is taken at low power where backaction is negligible.
    """
    if area_driven <= 0 or area_thermal <= 0:
        raise ValueError("areas must be > 0")
    if p_thermal <= 0 or p_driven <= 0:
        raise ValueError("powers must be > 0")
    return x_th * np.sqrt((area_driven / area_thermal) * (p_thermal / p_driven) ** 2)


def _exact_discretization(omega_eff: float, gamma_eff: float, force_psd: float, m_eff: float, dt: float):
    """One-step transition matrix and noise covariance of the linear SDE.

    State z = (x, v), dz = A z dt + (0, sigma/m) dW with two-sided force PSD
    sigma^2 = force_psd / 2.  Van Loan's construction gives the exact
    discrete transition Phi = expm(A dt) and process noise covariance Q, so
    the sampled path has no time-step bias.
    """
    a = np.array([[0.0, 1.0], [-omega_eff**2, -gamma_eff]])
    sigma_sq = 0.5 * force_psd  # single-sided 4 kT m gamma -> two-sided level
    w = np.array([[0.0, 0.0], [0.0, sigma_sq / m_eff**2]])
    block = np.zeros((4, 4))
    block[:2, :2] = -a
    block[:2, 2:] = w
    block[2:, 2:] = a.T
    e = expm(block * dt)
    phi = e[2:, 2:].T
    q = phi @ e[:2, 2:]
    q = 0.5 * (q + q.T)  # symmetrize float residue
    return phi, q


def langevin_oracle(
    mech: MechanicalMode,
    gamma_eff: float,
    temperature: float,
    duration: float,
    seed: int,
    omega_eff: float | None = None,
    sample_rate: float | None = None,
    nperseg: int | None = None,
) -> DisplacementPSD:
    """Time-domain oracle: Welch PSD of a simulated thermal trajectory.

    Integrates the damped oscillator driven by white thermal force with
    single-sided force PSD 4 k_B T m_eff gamma_m (the bath rate, regardless
    of gamma_eff), using the exact discretization of the linear SDE, and
    returns the periodogram-averaged displacement PSD.  Deterministic given
    (seed, sample_rate, duration).

    ``duration`` must comfortably exceed 1/gamma_eff; shorter records are
    rejected as insufficient.
    """
    if gamma_eff <= 0:
        raise ValueError("gamma_eff must be > 0")
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if omega_eff is None:
        omega_eff = mech.omega_m
    if duration < 20.0 / gamma_eff:
        raise ValueError(
            f"duration {duration:g} s is insufficient; need >> 1/gamma_eff = {1.0 / gamma_eff:g} s"
        )
    if sample_rate is None:
        sample_rate = 4.0 * omega_eff / (2.0 * np.pi)
    dt = 1.0 / sample_rate
    n_keep = int(round(duration * sample_rate))
    n_burn = int(round(20.0 / gamma_eff * sample_rate))
    n_total = n_keep + n_burn

    force_psd = 4.0 * k_B * temperature * mech.m_eff * mech.gamma_m
    phi, q = _exact_discretization(omega_eff, gamma_eff, force_psd, mech.m_eff, dt)

    # The position samples follow an ARMA(2,1) recursion driven by the
    # per-step state noise w_n ~ N(0, Q):
    #   x[n] = tr(Phi) x[n-1] - det(Phi) x[n-2] + wx[n-1] - Phi11 wx[n-2] + Phi01 wv[n-2]
    rng = np.random.default_rng(seed)
    if temperature == 0.0 or not np.any(q):
        x = np.zeros(n_keep)
    else:
        chol = cholesky(q + 1e-300 * np.eye(2), lower=True)
        w = rng.standard_normal((n_total + 1, 2)) @ chol.T
        eta = w[1:, 0] - phi[1, 1] * w[:-1, 0] + phi[0, 1] * w[:-1, 1]
        tr = phi[0, 0] + phi[1, 1]
        det = phi[0, 0] * phi[1, 1] - phi[0, 1] * phi[1, 0]
        x = lfilter([1.0], [1.0, -tr, det], eta)[n_burn:]

    if nperseg is None:
        nperseg = int(2 ** np.floor(np.log2(max(x.size // 8, 16))))
    freq, psd = welch(
        x,
        fs=sample_rate,
        window="hann",
        nperseg=min(nperseg, x.size),
        noverlap=min(nperseg, x.size) // 2,
        detrend="constant",
    )
    return DisplacementPSD(2.0 * np.pi * freq[1:], psd[1:])
