import math

import numpy as np
import pytest

from biphoton.crystal import (
    BBO,
    C_UM_PER_FS,
    CrystalParams,
    SellmeierSet,
    dindex_dwavelength,
    dindex_extraordinary_dtheta,
    dispersion_data,
    group_delay_coefficient,
    index_extraordinary,
    index_ordinary,
    index_principal_extraordinary,
    phase_matching_angle,
    phase_mismatch,
    walkoff_angle,
)
from biphoton.errors import InvalidConfig, NoPhaseMatching, OutOfValidityWindow

# reference values from a 30-digit mpmath evaluation of the same formulas
NO_405 = 1.69229938305627324779
NO_810 = 1.66107240583708644643
NE_405 = 1.56796592155747179706
THETA_STAR = 0.722935145985600511875
RHO_P = 0.0762916837347544186899
RHO_S = 0.0717554826270775231248
D_S = -0.268477228335125509631
D_I = -0.0758361416817718775072

FLAT = SellmeierSet(ordinary=(2.25, 0.0, 0.0, 0.0), extraordinary=(2.25, 0.0, 0.0, 0.0))


def central(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def test_ordinary_index_values():
    assert index_ordinary(BBO, 0.405) == pytest.approx(1.6923, abs=5e-4)
    assert index_ordinary(BBO, 0.810) == pytest.approx(1.6611, abs=5e-4)
    assert index_ordinary(BBO, 0.405) == pytest.approx(NO_405, rel=1e-13)
    assert index_ordinary(BBO, 0.810) == pytest.approx(NO_810, rel=1e-13)


def test_constant_index_set():
    lam = np.linspace(0.3, 1.0, 7)
    assert np.allclose(index_ordinary(FLAT, lam), 1.5, rtol=0, atol=1e-15)


def test_extraordinary_limits():
    lam = 0.405
    assert index_extraordinary(BBO, lam, 0.0) == pytest.approx(index_ordinary(BBO, lam), rel=4e-16)
    assert index_extraordinary(BBO, lam, np.pi / 2) == pytest.approx(index_principal_extraordinary(BBO, lam), rel=4e-16)
    assert index_principal_extraordinary(BBO, lam) == pytest.approx(1.5680, abs=5e-4)
    assert index_principal_extraordinary(BBO, lam) == pytest.approx(NE_405, rel=1e-13)


def test_extraordinary_decreases_with_angle():
    theta = np.linspace(0, np.pi / 2, 200)
    n = index_extraordinary(BBO, 0.6, theta)
    assert np.all(np.diff(n) < 0)


def test_on_axis_degeneracy_across_window():
    lam = np.linspace(0.221, 1.059, 50)
    np.testing.assert_allclose(index_extraordinary(BBO, lam, 0.0), index_ordinary(BBO, lam), rtol=4e-16, atol=0)


def test_sellmeier_positive_in_window():
    lam = np.linspace(*BBO.window, 400)
    for a, b, c, d in (BBO.ordinary, BBO.extraordinary):
        assert np.all(lam**2 - c > 0)
        assert np.all(a + b / (lam**2 - c) - d * lam**2 > 1)


def test_validity_window():
    with pytest.raises(OutOfValidityWindow):
        index_ordinary(BBO, 0.2)
    with pytest.raises(OutOfValidityWindow):
        index_extraordinary(BBO, 1.2, 0.5)
    with pytest.raises(OutOfValidityWindow):
        phase_matching_angle(BBO, 0.6)  # idler at 1.2 um


def test_walkoff_vanishes_on_principal_axes():
    assert abs(walkoff_angle(BBO, 0.405, 0.0)) < 1e-9
    assert abs(walkoff_angle(BBO, 0.405, np.pi / 2)) < 1e-9


def test_walkoff_nonnegative():
    lam, theta = np.meshgrid(np.linspace(0.23, 1.05, 30), np.linspace(0, np.pi / 2, 30))
    assert np.all(walkoff_angle(BBO, lam, theta) >= 0)


def test_walkoff_matches_finite_difference():
    theta = phase_matching_angle(BBO, 0.405)
    rho = walkoff_angle(BBO, 0.405, theta)
    n = index_extraordinary(BBO, 0.405, theta)
    fd = -central(lambda t: index_extraordinary(BBO, 0.405, t), theta, 1e-5) / n
    assert rho == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("lam", np.linspace(0.23, 1.05, 50))
def test_derivatives_match_finite_differences(lam):
    for theta in np.linspace(0.05, 1.5, 7):
        a = dindex_extraordinary_dtheta(BBO, lam, theta)
        fd = central(lambda t: index_extraordinary(BBO, lam, t), theta, 1e-5)
        assert a == pytest.approx(fd, rel=1e-6)
        a = dindex_dwavelength(BBO, lam, theta)
        fd = central(lambda x: index_extraordinary(BBO, x, theta), lam, 1e-5)
        assert a == pytest.approx(fd, rel=1e-6)
    a = dindex_dwavelength(BBO, lam)
    fd = central(lambda x: index_ordinary(BBO, x), lam, 1e-5)
    assert a == pytest.approx(fd, rel=1e-6)


def test_group_delay_dispersionless():
    assert group_delay_coefficient(FLAT, 0.5) == math.sqrt(2.25) / C_UM_PER_FS
    assert group_delay_coefficient(FLAT, 0.5, 0.7) == pytest.approx(math.sqrt(2.25) / C_UM_PER_FS, rel=1e-15)


def test_group_delay_ordinary_finite_difference():
    lam = 0.810
    n = index_ordinary(BBO, lam)
    fd = central(lambda x: index_ordinary(BBO, x), lam, 1e-4)
    assert group_delay_coefficient(BBO, lam) == pytest.approx((n - lam * fd) / C_UM_PER_FS, rel=1e-6)


def test_group_delay_on_axis_equals_ordinary():
    assert group_delay_coefficient(BBO, 0.81, 0.0) == pytest.approx(group_delay_coefficient(BBO, 0.81), rel=1e-15)


def test_phase_matching_angle():
    theta = phase_matching_angle(BBO, 0.405)
    assert 0 < theta < np.pi / 2
    assert abs(phase_mismatch(BBO, 0.405, theta)) < 1e-12
    assert theta == pytest.approx(THETA_STAR, rel=1e-12)
    assert math.degrees(theta) == pytest.approx(41.4211, abs=1e-4)


def test_phase_matching_relabeling_invariant():
    # the mismatch only depends on the set of polarizations, not on which photon is called signal
    lp, ls = 0.405, 0.81
    theta = phase_matching_angle(BBO, lp)
    swapped = index_extraordinary(BBO, lp, theta) / lp - index_ordinary(BBO, ls) / ls - index_extraordinary(BBO, ls, theta) / ls
    assert abs(swapped) < 1e-12


def test_isotropic_medium_cannot_phase_match():
    iso = SellmeierSet(ordinary=BBO.ordinary, extraordinary=BBO.ordinary)
    with pytest.raises(NoPhaseMatching):
        phase_matching_angle(iso, 0.405)


def test_dispersion_data_bbo():
    c = CrystalParams(length=1000.0, theta=phase_matching_angle(BBO, 0.405))
    d = dispersion_data(c, 0.405)
    assert d.rho_p > 0 and d.rho_s > 0
    assert d.d_s != d.d_i
    assert d.rho_p == pytest.approx(RHO_P, rel=1e-9)
    assert d.rho_s == pytest.approx(RHO_S, rel=1e-9)
    assert d.d_s == pytest.approx(D_S, rel=1e-9)
    assert d.d_i == pytest.approx(D_I, rel=1e-9)


def test_dispersion_data_dispersionless():
    d = dispersion_data(CrystalParams(length=1000.0, theta=0.6, sellmeier=FLAT), 0.405)
    # zero up to the rounding of n - lambda dn/dlambda at ~1e-15 fs/um
    assert np.allclose((d.rho_p, d.rho_s, d.d_s, d.d_i), 0.0, rtol=0, atol=1e-14)


def test_crystal_params_validation():
    with pytest.raises(InvalidConfig):
        CrystalParams(length=0.0, theta=0.5)
    with pytest.raises(InvalidConfig):
        CrystalParams(length=1.0, theta=np.pi / 2)
    with pytest.raises(InvalidConfig):
        CrystalParams(length=1.0, theta=0.5, sinc_gamma=0.0)
