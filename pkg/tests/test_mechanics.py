import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import hbar, k as k_B

from diskmech import (
    MechanicalMode,
    coherence_ratio,
    combine_quality_factors,
    qf_product,
    thermal_amplitude,
    thermal_occupancy,
    zero_point_motion,
)


def test_zero_point_motion_headline_device(mech_rbm):
    assert zero_point_motion(mech_rbm) == pytest.approx(0.32e-15, rel=0.02)


def test_zero_point_motion_hand_formula():
    mode = MechanicalMode(f_m=2.0e9, q_m=9000.0, m_eff=4.0e-14)
    expected = math.sqrt(hbar / (2.0 * 4.0e-14 * 2 * math.pi * 2.0e9))
    assert zero_point_motion(mode) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(3.24e-16, rel=0.01)


def test_zero_point_motion_mass_scaling(mech_rbm):
    heavier = MechanicalMode(f_m=mech_rbm.f_m, q_m=mech_rbm.q_m, m_eff=4.0 * mech_rbm.m_eff)
    assert zero_point_motion(heavier) == pytest.approx(0.5 * zero_point_motion(mech_rbm), rel=1e-14)


def test_thermal_amplitude_room_temperature_window():
    mode = MechanicalMode(f_m=2.0e9, q_m=9000.0, m_eff=4.0e-14)
    x_th = thermal_amplitude(mode, 295.0)
    assert 24e-15 <= x_th <= 25.5e-15


def test_thermal_amplitude_vanishes_at_zero():
    mode = MechanicalMode(f_m=2.0e9, q_m=9000.0, m_eff=4.0e-14)
    assert thermal_amplitude(mode, 0.0) == 0.0


def test_thermal_to_zeropoint_ratio_identity(mech_rbm):
    # (x_th / x_zpm)^2 = 2 k_B T / (hbar omega_m) ~ 2 n_th for n_th >> 1
    temperature = 295.0
    ratio_sq = (thermal_amplitude(mech_rbm, temperature) / zero_point_motion(mech_rbm)) ** 2
    assert ratio_sq == pytest.approx(2 * k_B * temperature / (hbar * mech_rbm.omega_m), rel=1e-12)
    assert ratio_sq == pytest.approx(2 * thermal_occupancy(mech_rbm, temperature), rel=1e-3)


def test_equipartition_identity(mech_rbm):
    temperature = 201.5
    x_th = thermal_amplitude(mech_rbm, temperature)
    assert x_th**2 * mech_rbm.m_eff * mech_rbm.omega_m**2 == pytest.approx(
        k_B * temperature, rel=1e-12
    )


def test_combine_quality_factors_values():
    assert combine_quality_factors([9000.0]) == pytest.approx(9000.0, rel=1e-14)
    assert combine_quality_factors([2 * 7e3, 2 * 7e3]) == pytest.approx(7e3, rel=1e-14)
    assert combine_quality_factors([12000.0, 36000.0]) == pytest.approx(9000.0, rel=1e-14)


def test_combine_quality_factors_rejects_bad_input():
    with pytest.raises(ValueError):
        combine_quality_factors([])
    with pytest.raises(ValueError):
        combine_quality_factors([1e4, -2.0])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(1.0, 1e8), min_size=1, max_size=6))
def test_combine_quality_factors_properties(partials):
    total = combine_quality_factors(partials)
    assert total <= min(partials) * (1 + 1e-12)
    assert combine_quality_factors(list(reversed(partials))) == pytest.approx(total, rel=1e-12)


def test_thermal_occupancy_bose_factor(mech_rbm):
    # independent Bose evaluation
    x = hbar * mech_rbm.omega_m / (k_B * 295.0)
    expected = 1.0 / math.expm1(x)
    n_th = thermal_occupancy(mech_rbm, 295.0)
    assert n_th == pytest.approx(expected, rel=1e-14)
    assert n_th == pytest.approx(2.93e3, rel=0.005)


def test_thermal_occupancy_freezes_out():
    # hbar omega / k_B ~ 0.1 K for the RBM; far below that the mode is empty
    mode = MechanicalMode(f_m=2.1e9, q_m=9000.0, m_eff=4.0e-14)
    assert thermal_occupancy(mode, 2e-4) < 1e-100


def test_occupancy_high_temperature_asymptotics(mech_rbm):
    # n_th hbar w -> k_B T - hbar w / 2 + O(x^2) k_B T for x = hbar w / k_B T < 0.01
    for temperature in (50.0, 295.0, 1000.0):
        x = hbar * mech_rbm.omega_m / (k_B * temperature)
        assert x < 0.01
        energy = thermal_occupancy(mech_rbm, temperature) * hbar * mech_rbm.omega_m
        classical = k_B * temperature - 0.5 * hbar * mech_rbm.omega_m
        assert abs(energy - classical) <= k_B * temperature * x**2 / 10.0


def test_coherence_criterion_headline_device(mech_rbm):
    assert mech_rbm.q_m > thermal_occupancy(mech_rbm, 295.0)
    assert coherence_ratio(mech_rbm, 295.0) == pytest.approx(
        mech_rbm.q_m / thermal_occupancy(mech_rbm, 295.0), rel=1e-14
    )


def test_qf_product_values(mech_rbm):
    assert qf_product(mech_rbm) == pytest.approx(1.89e13, rel=1e-12)
    assert qf_product(MechanicalMode(f_m=1.0, q_m=1.0, m_eff=1e-15)) == 1.0
    second = MechanicalMode(f_m=2.0e9, q_m=2000.0, m_eff=4.0e-14)
    assert qf_product(second) == pytest.approx(4e12, rel=1e-12)


def test_mechanical_mode_rejects_nonpositive():
    with pytest.raises(ValueError):
        MechanicalMode(f_m=-2e9, q_m=9000.0, m_eff=4e-14)
    with pytest.raises(ValueError):
        MechanicalMode(f_m=2e9, q_m=0.0, m_eff=4e-14)
