import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from slewind.closed_forms import (green1_closed, h0, h1_closed, pde_residual_h1, schramm_probability,
                                  simmons_cardy_two_point)
from slewind.core_cft import CANONICAL, BoundaryFrame

xs = st.floats(-5, 5)
ys = st.floats(0.05, 5)


def test_schramm_examples():
    assert schramm_probability(1j) == 0.5
    assert schramm_probability(1 + 1j) == pytest.approx(0.5 + 1 / (2 * math.sqrt(2)), abs=1e-14)
    # at kappa = 4 the probability is 1 - arg(z)/pi
    assert schramm_probability(1 + 1j, 4.0) == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(ValueError):
        schramm_probability(1 - 1j)


@given(xs, ys)
def test_schramm_mirror_and_saw_form(x, y):
    z = complex(x, y)
    p = schramm_probability(z)
    assert p + schramm_probability(-z.conjugate()) == pytest.approx(1, abs=1e-12)
    assert p == pytest.approx(0.5 + x / (2 * abs(z)), abs=1e-10)


@given(xs, ys, st.floats(0.1, 10))
def test_schramm_scale_invariance(x, y, lam):
    z = complex(x, y)
    assert schramm_probability(lam * z, 3.0) == pytest.approx(schramm_probability(z, 3.0), abs=1e-11)


def test_simmons_cardy_limits():
    z = 1 + 1j
    far = simmons_cardy_two_point(z, 1e7 * (1 + 1j))
    assert far == pytest.approx(schramm_probability(z) * schramm_probability(1 + 1j), abs=1e-5)
    assert simmons_cardy_two_point(1j, 2j) == pytest.approx(0.35255, abs=5e-5)
    with pytest.raises(ValueError):
        simmons_cardy_two_point(1j, 1j)


@given(xs, ys, xs, ys)
def test_simmons_cardy_symmetric_and_bounded(x, y, u, v):
    z, w = complex(x, y), complex(u, v)
    if abs(z - w) < 1e-6:
        return
    p = simmons_cardy_two_point(z, w)
    assert p == pytest.approx(simmons_cardy_two_point(w, z), abs=1e-12)
    assert -1e-12 <= p <= min(schramm_probability(z), schramm_probability(w)) + 1e-12


def test_h0():
    assert h0(CANONICAL).value == 1
    assert h0(BoundaryFrame(-1, 1)).real == pytest.approx(2 ** (-2 * 5 / 8))


def test_h1_closed_values():
    assert h1_closed(1j).real == pytest.approx(0, abs=1e-15)
    assert h1_closed(1 + 1j).real == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    assert h1_closed(2.5 + 0.5j, kappa=3.0).real == pytest.approx(2.5 / abs(2.5 + 0.5j), rel=1e-14)


@given(xs, ys)
def test_h1_closed_is_twice_schramm_minus_one(x, y):
    z = complex(x, y)
    assert h1_closed(z).real == pytest.approx(2 * schramm_probability(z) - 1, abs=1e-10)


def test_h1_frame_covariance():
    # reversing the frame reverses the orientation of the trace
    z = 0.4 + 0.9j
    a = h1_closed(z, BoundaryFrame(0, math.inf)).real
    b = h1_closed(z, BoundaryFrame(math.inf, 0)).real
    assert a == pytest.approx(-b, abs=1e-14)
    # z -> -1/z exchanges 0 and infinity
    assert h1_closed(-1 / z, BoundaryFrame(math.inf, 0)).real == pytest.approx(a, abs=1e-12)


def test_green1_closed():
    assert green1_closed(1j) == pytest.approx(1.0)
    z = 0.3 + 0.7j
    assert green1_closed(4 * z) == pytest.approx(4 ** (-2 / 3) * green1_closed(z), rel=1e-13)
    assert green1_closed(z, BoundaryFrame(0, math.inf)) == pytest.approx(green1_closed(z))


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 2), st.floats(0.3, 2), st.floats(-3, -0.5), st.floats(0.5, 3))
def test_pde_residual_small(x, y, x1, x2):
    # the residual is relative to |H1|, which vanishes on a curve through the frame
    z = complex(x, y)
    frame = BoundaryFrame(x1, x2)
    assume(abs(h1_closed(z, frame).real) > 0.05)
    h = 1e-3 * min(y, abs(z - x1), abs(z - x2))
    r1 = pde_residual_h1(z, frame, step=h)
    r2 = pde_residual_h1(z, frame, step=h / 2)
    assert r2 < 1e-5
    assert r2 < 1e-6 or 3 < r1 / r2 < 5


@pytest.mark.parametrize("z,frame,kappa", [(1 + 2j, BoundaryFrame(0, 3), 8 / 3), (-2 + 1j, BoundaryFrame(-1, 4), 3.0)])
def test_pde_residual_examples(z, frame, kappa):
    assert pde_residual_h1(z, frame, kappa, step=1e-3) < 1e-5


def test_pde_residual_needs_finite_frame():
    with pytest.raises(ValueError):
        pde_residual_h1(1j, CANONICAL)
