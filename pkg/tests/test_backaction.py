import numpy as np
import pytest
from scipy.constants import c as c_light

from diskmech import (
    MechanicalMode,
    OperatingPoint,
    OpticalMode,
    OptomechanicalCoupling,
    backaction_sweep,
    cooperativity,
    damping_shift,
    dropped_power,
    frequency_shift,
    intracavity_photons,
    intrinsic_q_for_threshold,
    is_self_oscillating,
    optical_spring_zero,
    threshold_power,
    transmission,
)

TWO_PI = 2.0 * np.pi


def test_damping_shift_zero_at_zero_detuning(mode_c, mech_rbm, coupling):
    op = OperatingPoint(0.0, photon_number=6.5e5)
    assert damping_shift(op, coupling, mode_c, mech_rbm) == 0.0


def test_damping_shift_antisymmetric(mode_c, mech_rbm, coupling):
    for x in np.linspace(0.05, 3.0, 40):
        d = x * mech_rbm.omega_m
        plus = damping_shift(OperatingPoint(d, 1e5), coupling, mode_c, mech_rbm)
        minus = damping_shift(OperatingPoint(-d, 1e5), coupling, mode_c, mech_rbm)
        assert plus + minus == 0.0


def test_damping_shift_hand_evaluation(mode_c, mech_rbm, coupling):
    # independent evaluation of the two-Lorentzian difference at Delta = +omega_m
    g0 = TWO_PI * 26e3
    n = 6.5e5
    omega_o = TWO_PI * c_light / 1530e-9
    gamma = omega_o / 6.0e4
    omega_m = TWO_PI * 2.1e9
    q = 0.25 * gamma**2
    expected = g0**2 * n * (gamma / (q + (2 * omega_m) ** 2) - gamma / q)
    got = damping_shift(OperatingPoint(omega_m, n), coupling, mode_c, mech_rbm)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got / TWO_PI == pytest.approx(-4.7e5, rel=0.01)


def test_blue_detuning_antidamps(mode_c, mech_rbm, coupling):
    op = OperatingPoint(mech_rbm.omega_m, photon_number=1e5)
    assert damping_shift(op, coupling, mode_c, mech_rbm) < 0


def test_frequency_shift_trivials(mode_c, mech_rbm, coupling):
    assert frequency_shift(OperatingPoint(0.5e10), coupling, mode_c, mech_rbm, alpha=-1e9) == 0.0
    # far detuned: only the static thermal term survives
    op = OperatingPoint(1e15, photon_number=6.5e5, dropped_power=1.5e-3)
    alpha = -TWO_PI * 2.5e8
    shift = frequency_shift(op, coupling, mode_c, mech_rbm, alpha)
    assert shift == pytest.approx(alpha * 1.5e-3, rel=1e-4)


def test_spring_term_vanishes_far_detuned_and_crosses_zero(mode_c, mech_rbm, coupling):
    op_far = OperatingPoint(1e14, photon_number=6.5e5)
    assert abs(frequency_shift(op_far, coupling, mode_c, mech_rbm, 0.0)) < 1e-2 * abs(
        frequency_shift(OperatingPoint(mech_rbm.omega_m, 6.5e5), coupling, mode_c, mech_rbm, 0.0)
    )
    root = optical_spring_zero(mode_c, mech_rbm)
    assert 0.0 < root < mech_rbm.omega_m
    below = frequency_shift(OperatingPoint(0.9 * root, 1e5), coupling, mode_c, mech_rbm, 0.0)
    above = frequency_shift(OperatingPoint(1.1 * root, 1e5), coupling, mode_c, mech_rbm, 0.0)
    assert below < 0 < above


def test_cooperativity_values(mode_c, coupling):
    mech = MechanicalMode(f_m=2.0e9, q_m=9000.0, m_eff=4.0e-14)
    assert cooperativity(OperatingPoint(0.0, 0.0), coupling, mode_c, mech) == 0.0
    c_val = cooperativity(OperatingPoint(0.0, 2.8e6), coupling, mode_c, mech)
    assert c_val == pytest.approx(2.7, rel=0.15)
    assert cooperativity(OperatingPoint(0.0, 5.6e6), coupling, mode_c, mech) == pytest.approx(
        2 * c_val, rel=1e-14
    )


def test_threshold_power_headline_device(mode_c, mech_rbm, coupling):
    p_t = threshold_power(mode_c, mech_rbm, coupling)
    assert p_t == pytest.approx(760e-6, rel=0.15)


def test_threshold_power_g0_scaling(mode_c, mech_rbm):
    g = OptomechanicalCoupling(g0=TWO_PI * 26e3)
    g_half = OptomechanicalCoupling(g0=g.g0 / 2.0)
    assert threshold_power(mode_c, mech_rbm, g_half) == 4.0 * threshold_power(mode_c, mech_rbm, g)


def test_implied_intrinsic_q_for_second_device(coupling):
    mode_d = OpticalMode(1530e-9, 4.0e4, 4.0e4)
    mech_d = MechanicalMode(f_m=2.1e9, q_m=8000.0, m_eff=4.0e-14)
    q_i = intrinsic_q_for_threshold(3.0e-3, mode_d, mech_d, coupling)
    assert 1e4 <= q_i <= 1e5
    # inversion consistency: plugging the rate back reproduces the target
    gamma_i = mode_d.omega_o / q_i
    from diskmech.backaction import _threshold_per_intrinsic_rate

    assert _threshold_per_intrinsic_rate(mode_d, mech_d, coupling) * gamma_i == pytest.approx(
        3.0e-3, rel=1e-12
    )


def test_self_oscillation_predicate(mode_c, mech_rbm, coupling):
    quiet, margin_quiet = is_self_oscillating(OperatingPoint(mech_rbm.omega_m, 0.0), coupling, mode_c, mech_rbm)
    assert not quiet and margin_quiet == pytest.approx(mech_rbm.gamma_m)
    hot, margin_hot = is_self_oscillating(OperatingPoint(mech_rbm.omega_m, 6.5e5), coupling, mode_c, mech_rbm)
    assert hot and margin_hot < 0
    # the flag is the inclusive sign of the margin across the threshold scan
    for n in np.linspace(0.0, 1e6, 101):
        flag, margin = is_self_oscillating(OperatingPoint(mech_rbm.omega_m, n), coupling, mode_c, mech_rbm)
        assert flag == (margin <= 0.0)


def test_sideband_resolved_limit(mech_rbm, coupling):
    # gamma_o / omega_m < 0.02: dgamma(omega_m) -> -4 g0^2 N / gamma_o
    mode = OpticalMode(1530e-9, 1.2e7, 1.0e7)
    assert mode.gamma_loaded / mech_rbm.omega_m < 0.02
    n = 1e4
    got = damping_shift(OperatingPoint(mech_rbm.omega_m, n), coupling, mode, mech_rbm)
    assert got == pytest.approx(-4 * coupling.g0**2 * n / mode.gamma_loaded, rel=0.01)


def test_resolved_limit_cooperativity_consistency(mech_rbm, coupling):
    # |dgamma(omega_m)| / gamma_m = 4 C within 2% in the resolved limit
    mode = OpticalMode(1530e-9, 1.2e7, 1.0e7)
    op = OperatingPoint(mech_rbm.omega_m, 1e4)
    lhs = abs(damping_shift(op, coupling, mode, mech_rbm)) / mech_rbm.gamma_m
    assert lhs == pytest.approx(4 * cooperativity(op, coupling, mode, mech_rbm), rel=0.02)


def test_backaction_sweep_consistent_with_lineshape(mode_c, mech_rbm, coupling):
    p_i = 2e-3
    det = np.linspace(0.2, 1.8, 15) * mech_rbm.omega_m
    sweep = backaction_sweep(det, mode_c, mech_rbm, coupling, p_i, alpha=-1e9)
    p_d = dropped_power(transmission(det, mode_c), p_i)
    np.testing.assert_allclose(sweep["photon_number"], intracavity_photons(p_d, mode_c), rtol=1e-13)
    for i, d in enumerate(det):
        op = OperatingPoint(d, sweep["photon_number"][i], p_d[i])
        assert sweep["dgamma"][i] == pytest.approx(
            float(damping_shift(op, coupling, mode_c, mech_rbm)), rel=1e-13
        )
        assert sweep["domega"][i] == pytest.approx(
            float(frequency_shift(op, coupling, mode_c, mech_rbm, -1e9)), rel=1e-13
        )


def test_operating_point_validation(mode_c):
    with pytest.raises(ValueError):
        OperatingPoint(detuning=np.nan)
    with pytest.raises(ValueError):
        OperatingPoint(detuning=0.0, photon_number=-1.0)
    op = OperatingPoint.from_drive(0.3 * mode_c.gamma_loaded, mode_c, 1e-3)
    op.check_consistency(mode_c)
    bad = OperatingPoint(0.0, photon_number=op.photon_number * 2, dropped_power=op.dropped_power)
    with pytest.raises(ValueError, match="inconsistent"):
        bad.check_consistency(mode_c)


def test_coupling_requires_positive_g0():
    with pytest.raises(ValueError):
        OptomechanicalCoupling(g0=0.0)
