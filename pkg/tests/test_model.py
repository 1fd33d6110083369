import math

import numpy as np
import pytest

from biphoton.config import make_config
from biphoton.crystal import DispersionData
from biphoton.errors import InvalidConfig, NonPositiveInput
from biphoton.model import (
    QIX,
    QIY,
    QSX,
    QSY,
    WI,
    WS,
    X_BLOCK,
    Y_BLOCK,
    FilterMask,
    FilterSet,
    PumpParams,
    assemble_quadratic_form,
    bandwidth_to_angular,
    mode_function_value,
)

DISP = DispersionData(rho_p=0.0763, rho_s=0.0718, d_s=-0.2685, d_i=-0.0758)


def test_bandwidth_conversion():
    assert bandwidth_to_angular(1.0, 0.405) == pytest.approx(2 * math.pi * 0.299792458 * 0.001 / 0.405**2, rel=1e-15)
    assert bandwidth_to_angular(1.0, 0.405) == pytest.approx(1.1485e-2, rel=1e-4)
    assert bandwidth_to_angular(2.0, 0.405) == 2 * bandwidth_to_angular(1.0, 0.405)
    assert bandwidth_to_angular(1e-12, 0.405) < 1e-13
    with pytest.raises(NonPositiveInput):
        bandwidth_to_angular(0.0, 0.405)


def test_phase_matching_term_only():
    cfg = make_config(pump_waist=0.0, pump_bandwidth=math.inf, dispersion=DISP)
    a = assemble_quadratic_form(cfg, FilterMask.NONE).matrix
    b = np.array([DISP.rho_p - DISP.rho_s, 0, DISP.rho_p, 0, DISP.d_s, -DISP.d_i])
    expected = -(0.193 * 1000.0**2 / 4) * np.outer(b, b)
    np.testing.assert_allclose(a, expected, rtol=1e-14, atol=0)
    assert np.linalg.matrix_rank(a) == 1


def test_baseline_negative_definite(baseline):
    a = assemble_quadratic_form(baseline, FilterMask.BOTH).matrix
    np.linalg.cholesky(-a)


def test_symmetry_and_block_structure(baseline):
    for mask in FilterMask:
        a = assemble_quadratic_form(baseline, mask).matrix
        assert np.array_equal(a, a.T)
        assert np.all(a[np.ix_(Y_BLOCK, X_BLOCK)] == 0.0)


def test_mask_semantics(baseline):
    both = assemble_quadratic_form(baseline, FilterMask.BOTH).matrix
    sig = assemble_quadratic_form(baseline, FilterMask.SIGNAL_ONLY).matrix
    diff = both - sig
    changed = {(j, k) for j, k in zip(*np.nonzero(diff))}
    assert changed == {(QIX, QIX), (QIY, QIY), (WI, WI)}


def test_form_is_read_only(baseline):
    a = assemble_quadratic_form(baseline).matrix
    with pytest.raises(ValueError):
        a[0, 0] = 1.0


def test_mode_function_peak_and_decay(baseline, rng):
    q = assemble_quadratic_form(baseline)
    assert mode_function_value(q, np.zeros(6)) == 1.0
    x = rng.normal(size=(100, 6)) * 0.01
    assert np.all(mode_function_value(q, x) < 1.0)


def test_mode_function_antidiagonal(baseline):
    """Pump envelope drops out along Omega_s = -Omega_i; compare to the scalar formula."""
    q = assemble_quadratic_form(baseline)
    om = 5 * bandwidth_to_angular(1.0, 0.405)
    x = np.array([0, 0, 0, 0, om, -om])
    d = baseline.dispersion
    inv_s = 1 / bandwidth_to_angular(5.0, 0.81) ** 2
    quad = om**2 * (2 * inv_s + 0.193 * 1000.0**2 * (d.d_s + d.d_i) ** 2)
    assert mode_function_value(q, x) == pytest.approx(math.exp(-0.5 * quad), rel=1e-12)


@pytest.mark.parametrize("field,weak,strong", [("w_s", 10, 30), ("w_i", 10, 30), ("sigma_s", 5, 1), ("sigma_i", 5, 1)])
def test_stronger_filter_is_loewner_larger(field, weak, strong):
    a_weak = assemble_quadratic_form(make_config(**{field: weak})).matrix
    a_strong = assemble_quadratic_form(make_config(**{field: strong})).matrix
    assert np.linalg.eigvalsh(a_strong - a_weak).max() <= 1e-12 * np.abs(a_weak).max()


def _principal_vector(block):
    _, v = np.linalg.eigh(block)
    return v[:, -1]


def test_unfiltered_tilts(baseline):
    m = -assemble_quadratic_form(baseline, FilterMask.NONE).matrix
    anti = np.array([1, -1]) / math.sqrt(2)
    for coords in ((WS, WI), (QSX, QIX)):
        v = _principal_vector(m[np.ix_(coords, coords)])
        assert abs(abs(v @ anti) - 1) > 1e-6
        assert abs(abs(v @ np.array([1, 1]) / math.sqrt(2)) - 1) > 1e-6


def test_no_tilt_without_asymmetry():
    sym = DispersionData(rho_p=0.07, rho_s=0.0, d_s=-0.1, d_i=0.1)
    cfg = make_config(dispersion=sym)
    m = -assemble_quadratic_form(cfg, FilterMask.NONE).matrix
    block = m[np.ix_((WS, WI), (WS, WI))]
    assert block[0, 0] == pytest.approx(block[1, 1], rel=1e-14)


def test_input_validation():
    with pytest.raises(InvalidConfig):
        PumpParams(waist=-1.0)
    with pytest.raises(InvalidConfig):
        FilterSet(sigma_s=0.0)
    with pytest.raises(InvalidConfig):
        from dataclasses import replace

        replace(make_config(), signal_wavelength=0.7)
