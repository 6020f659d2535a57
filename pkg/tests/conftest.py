import numpy as np
import pytest

from diskmech import MechanicalMode, OpticalMode, OptomechanicalCoupling

TWO_PI = 2.0 * np.pi


@pytest.fixture
def mode_c():
    """Telecom mode of the headline device (loaded Q ~ 6e4)."""
    return OpticalMode(lambda_o=1530e-9, q_intrinsic=6.4e4, q_loaded=6.0e4)


@pytest.fixture
def mode_lineshape():
    """The doublet-free lineshape used for sweep synthesis (Q_t = 5.9e4)."""
    return OpticalMode(lambda_o=1530e-9, q_intrinsic=6.4e4, q_loaded=5.9e4)


@pytest.fixture
def mech_rbm():
    """2.1 GHz radial breathing mode, Q_m = 9000, 40 pg."""
    return MechanicalMode(f_m=2.1e9, q_m=9000.0, m_eff=4.0e-14)


@pytest.fixture
def coupling():
    return OptomechanicalCoupling(g0=TWO_PI * 26e3)
