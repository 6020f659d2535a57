import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskmech import MechanicalMode, SpinSusceptibility, driven_coupling, single_phonon_coupling
from diskmech.spectra import calibrate_amplitude
from diskmech.spin import excited_state_coupling


@pytest.fixture
def mech_strained(mech_rbm):
    """RBM with the strain scale pinned so eps_zpm = 3e-10 exactly."""
    return MechanicalMode(
        f_m=mech_rbm.f_m,
        q_m=mech_rbm.q_m,
        m_eff=mech_rbm.m_eff,
        strain_per_meter=3e-10 / mech_rbm.x_zpm,
    )


def test_single_phonon_coupling_device_values(mech_strained):
    assert single_phonon_coupling(mech_strained, SpinSusceptibility(20e9)) == pytest.approx(6.0, rel=1e-12)
    assert single_phonon_coupling(mech_strained, SpinSusceptibility(10e9)) == pytest.approx(3.0, rel=1e-12)


def test_single_phonon_coupling_vanishing_strain(mech_rbm):
    tiny = MechanicalMode(mech_rbm.f_m, mech_rbm.q_m, mech_rbm.m_eff, strain_per_meter=1e-280)
    assert single_phonon_coupling(tiny, SpinSusceptibility(20e9)) < 1e-260


def test_driven_coupling_identity_and_device_value(mech_strained):
    spin = SpinSusceptibility(20e9)
    g_e = single_phonon_coupling(mech_strained, spin)
    assert driven_coupling(mech_strained, spin, mech_strained.x_zpm) == pytest.approx(g_e, rel=1e-12)
    assert driven_coupling(mech_strained, spin, 31e-12) == pytest.approx(0.6e6, rel=0.10)


def test_driven_coupling_linearity(mech_strained):
    spin = SpinSusceptibility(20e9)
    g1 = driven_coupling(mech_strained, spin, 1e-12)
    assert driven_coupling(mech_strained, spin, 2e-12) == pytest.approx(2 * g1, rel=1e-14)
    with pytest.raises(ValueError):
        driven_coupling(mech_strained, spin, -1e-12)


@settings(max_examples=50, deadline=None)
@given(scale=st.floats(0.0, 1e6))
def test_driven_coupling_exactly_linear(scale):
    mech = MechanicalMode(2.1e9, 9000.0, 4.0e-14, strain_per_meter=9.4e5)
    spin = SpinSusceptibility(20e9)
    base = driven_coupling(mech, spin, 1e-15)
    assert driven_coupling(mech, spin, scale * 1e-15) == pytest.approx(scale * base, rel=1e-12)


def test_excited_state_factor(mech_strained):
    spin = SpinSusceptibility(20e9, excited_state_factor=1e5)
    assert excited_state_coupling(mech_strained, spin) == pytest.approx(0.6e6, rel=1e-9)


def test_location_derating(mech_strained):
    full = single_phonon_coupling(mech_strained, SpinSusceptibility(20e9))
    half = single_phonon_coupling(mech_strained, SpinSusceptibility(20e9, location_derating=0.5))
    assert half == pytest.approx(0.5 * full, rel=1e-14)


def test_end_to_end_amplitude_to_coupling(mech_strained):
    # area calibration producing ~31 pm feeds the driven coupling estimate
    from diskmech import thermal_amplitude

    x_th = thermal_amplitude(mech_strained, 295.0)
    area_ratio = (31e-12 / x_th) ** 2
    x_om = calibrate_amplitude(area_ratio, 1.0, 5e-5, 5e-5, x_th)
    g_drv = driven_coupling(mech_strained, SpinSusceptibility(20e9), x_om)
    assert g_drv == pytest.approx(0.6e6, rel=0.10)


def test_susceptibility_validation():
    with pytest.raises(ValueError):
        SpinSusceptibility(ground_state_d=0.0)
    with pytest.raises(ValueError):
        SpinSusceptibility(ground_state_d=20e9, location_derating=1.5)
