import pytest

from slewind.closed_forms import green1_closed
from slewind.core_cft import BoundaryFrame
from slewind.coulomb_gas import ConvergenceError
from slewind.green import (NotImplementedSpec, OpeCalibration, between_probability, calibrate_c31, green1,
                           green2, greenN_spec)


def test_calibration_constant():
    cal = calibrate_c31()
    assert cal.c31_squared == pytest.approx(0.43118568, rel=1e-6)
    assert cal.error < 1e-4
    with pytest.raises(ValueError):
        OpeCalibration(0.0)


def test_between_probability_scaling():
    # leading behaviour eps^{2/3} C31^2 G(z)
    c2 = calibrate_c31().c31_squared
    eps = 1e-3
    assert between_probability(1j, eps) / eps ** (2 / 3) == pytest.approx(c2, rel=0.01)


@pytest.mark.parametrize("z", [1 + 1j, -1 + 0.5j, 0.3 + 2j, 4 + 0.7j])
def test_green1_extrapolation(z):
    g = green1(z)
    assert g.value == pytest.approx(green1_closed(z), rel=1e-4)
    assert g.method == "extrapolation"


def test_green1_direction_independent():
    z = 0.7 + 1.3j
    a = green1(z, nu=1j).value
    b = green1(z, nu=complex(2 ** -0.5, 2 ** -0.5)).value
    assert a == pytest.approx(b, rel=1e-5)
    with pytest.raises(ValueError):
        green1(z, nu=2)


def test_green1_direct_block():
    frame = BoundaryFrame(-1, 3)
    for z in (0.2 + 0.4j, -2 + 3j, 1j):
        g = green1(z, frame, method="direct_block")
        assert g.value == pytest.approx(green1_closed(z, frame), rel=1e-10)
    with pytest.raises(ValueError):
        green1(1j, method="nope")


def test_green2_symmetric_and_positive():
    z, w = 1j, 1 + 1.5j
    a, b = green2(z, w), green2(w, z)
    assert a.value > 0
    assert a.value == pytest.approx(b.value, rel=1e-8)


def test_green2_direct_block_diverges():
    with pytest.raises(ConvergenceError):
        green2(1j, 2j, method="direct_block")
    with pytest.raises(ValueError):
        green2(1j, 1j)


def test_green_n_dispatch():
    assert greenN_spec([1j]).value == pytest.approx(1.0, rel=1e-4)
    spec = greenN_spec([1j, 2j, 1 + 1j])
    assert isinstance(spec, NotImplementedSpec)
    assert spec.n_points == 3
