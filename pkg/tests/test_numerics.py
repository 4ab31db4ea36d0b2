import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from slewind.numerics import (ContourDeformationRequired, ExtrapolationError, PowerFactor, Segment,
                              gamma_fn, graded_rule, hyp2f1, jacobi_rule, path_integral,
                              richardson_limit, segment_integral)

K = 8 / 3


def test_gamma():
    assert gamma_fn(0.5).real == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert (gamma_fn(1 / 3) * gamma_fn(2 / 3)).real == pytest.approx(2 * math.pi / math.sqrt(3), rel=1e-13)
    n1 = gamma_fn(2 / 3) / gamma_fn(1 / 3) ** 2
    assert n1.real == pytest.approx(float(mpmath.gamma(2 / 3) / mpmath.gamma(1 / 3) ** 2), rel=1e-13)
    with pytest.raises(ValueError):
        gamma_fn(-2)


def test_hyp2f1_examples():
    assert hyp2f1(0.3, 1.2, 2.5, 0.0) == 1.0
    assert hyp2f1(0.5, 1.5, 1.5, -1.0) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    with pytest.raises(ValueError):
        hyp2f1(1, 1, -1, 0.2)
    with pytest.raises(ValueError):
        hyp2f1(1, 1, 1.5, 1.0)


@given(st.floats(0.1, 2), st.floats(0.1, 2), st.floats(0.6, 3), st.floats(-5, 0.9))
def test_hyp2f1_vs_mpmath(a, b, c, x):
    ref = float(mpmath.hyp2f1(a, b, c, x))
    assert hyp2f1(a, b, c, x) == pytest.approx(ref, rel=1e-11)


@given(st.floats(0.1, 2), st.floats(0.1, 2), st.floats(0.6, 3), st.floats(-3, 0.8))
def test_euler_transformation(a, b, c, x):
    lhs = hyp2f1(a, b, c, x)
    rhs = (1 - x) ** (c - a - b) * hyp2f1(c - a, c - b, c, x)
    assert lhs == pytest.approx(rhs, rel=1e-11)


def test_schramm_self_check():
    rng = np.random.default_rng(1)
    for x, y in zip(rng.uniform(-3, 3, 20), rng.uniform(0.1, 3, 20)):
        k = K
        const = gamma_fn(4 / k).real / (math.sqrt(math.pi) * gamma_fn((8 - k) / (2 * k)).real)
        p = 0.5 + const * (x / y) * hyp2f1(0.5, 4 / k, 1.5, -x * x / (y * y))
        assert p == pytest.approx(0.5 + x / (2 * math.hypot(x, y)), abs=1e-10)


def test_jacobi_rule_basics():
    r = jacobi_rule(4)
    assert np.dot(r.weights, r.nodes ** 2) == pytest.approx(2 / 3, rel=1e-14)
    r = jacobi_rule(32, -2 / 3, -2 / 3)
    beta = gamma_fn(1 / 3) ** 2 / gamma_fn(2 / 3)
    # int_0^1 t^{-2/3}(1-t)^{-2/3} dt = 2^{1/3} * sum(weights) / 2^{1-4/3+1}
    assert r.weights.sum() == pytest.approx(2 ** (-1 / 3) * beta.real, rel=1e-12)
    assert np.all(np.diff(r.nodes) > 0)
    with pytest.raises(ValueError):
        jacobi_rule(0)
    with pytest.raises(ValueError):
        jacobi_rule(4, -1.0, 0.0)


@pytest.mark.parametrize("order", [2, 5, 9, 16])
@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (-2 / 3, -2 / 3), (-0.5, 0.7), (1.3, -0.25)])
def test_jacobi_exactness(order, alpha, beta):
    r = jacobi_rule(order, alpha, beta)
    for k in range(2 * order):
        # t = 2s - 1 turns each monomial into a sum of Beta integrals
        with mpmath.workdps(50):
            a, b = mpmath.mpf(alpha), mpmath.mpf(beta)
            exact = mpmath.fsum(mpmath.binomial(k, j) * 2 ** j * (-1) ** (k - j) * mpmath.beta(a + 1, b + j + 1)
                                for j in range(k + 1)) * mpmath.mpf(2) ** (a + b + 1)
        assert np.dot(r.weights, r.nodes ** k) == pytest.approx(float(exact), rel=1e-12, abs=1e-13)


def test_segment_trivial():
    assert segment_integral([], None, Segment(0, 1 + 1j), jacobi_rule(3)) == pytest.approx(1 + 1j)


def _j1_segment(eta, order=64, kappa=K):
    e = -kappa / 4
    arg = cmath.phase(eta)
    seg = Segment(0j, eta, branch_anchor=(arg, arg - math.pi))
    return segment_integral([PowerFactor(0j, e), PowerFactor(eta, e)], lambda u: 1 - u, seg,
                            jacobi_rule(order, e, e))


def _j1_oracle(eta, kappa=K):
    # u = eta t with the algebraic endpoint weight handled by QUADPACK's QAWS
    e = -kappa / 4
    arg = cmath.phase(eta)
    phase = abs(eta) ** (2 * e) * cmath.exp(1j * e * arg) * cmath.exp(1j * e * (arg - math.pi)) * eta

    def part(f):
        return integrate.quad(f, 0, 1, weight="alg", wvar=(e, e), epsabs=1e-14, epsrel=1e-13)[0]

    re = part(lambda t: (1 - eta * t).real)
    im = part(lambda t: (1 - eta * t).imag)
    return phase * (re + 1j * im)


@pytest.mark.parametrize("eta", [2.0, 1 + 1j, 0.4 - 0.9j, 1.9 + 0.3j, -0.5 + 0.2j])
def test_j1_against_adaptive_oracle(eta):
    assert _j1_segment(complex(eta)) == pytest.approx(_j1_oracle(complex(eta)), abs=1e-9)


def test_j1_order_doubling():
    for eta in (1 + 1j, 0.3 + 0.8j, 1.7 - 0.6j):
        a, b = _j1_segment(eta, 32), _j1_segment(eta, 64)
        assert abs(a - b) <= 1e-9 * abs(b)


def test_branch_path_independence():
    # (u - eta)^{-2/3} continued from arg(-eta) at u = 0; both paths cross the principal cut
    eta = 1 + 1j
    f = [PowerFactor(eta, -2 / 3)]
    anchor = [cmath.phase(-eta)]
    end = 0.5 + 2j
    straight = path_integral(f, None, [0j, end], 48, anchors=anchor)
    detour = path_integral(f, None, [0j, -0.5 + 1.2j, end], 48, anchors=anchor)
    t = np.linspace(0, 1, 20001)
    d = t * end - eta
    arg = np.unwrap(np.angle(d))
    prim = 3 * np.abs(d) ** (1 / 3) * np.exp(1j * arg / 3)
    exact = prim[-1] - prim[0]
    assert straight == pytest.approx(exact, rel=1e-10)
    assert detour == pytest.approx(exact, rel=1e-10)


def test_contour_deformation_request():
    f = [PowerFactor(0.5 + 1e-5j, -2 / 3)]
    with pytest.raises(ContourDeformationRequired):
        segment_integral(f, None, Segment(0, 1), jacobi_rule(16))


def test_graded_rule_near_singularity():
    d = 1e-4
    s, w = graded_rule(-1, 1, 32, near_points=[(1.0, d)])
    f = lambda x: 1 / ((x - 1) ** 2 + d * d)
    exact = (math.atan(0 / d) - math.atan(-2 / d)) / d
    assert np.dot(w, f(s)) == pytest.approx(exact, rel=1e-10)


def test_graded_rule_endpoint_weights():
    s, w = graded_rule(-1, 1, 24, (-2 / 3, -2 / 3), near_points=[(0.999, 1e-3)])
    vals = (1 - s * s) ** (-2 / 3)
    assert np.dot(w, vals) == pytest.approx(float(mpmath.beta(0.5, 1 / 3)), rel=1e-12)


def test_richardson_examples():
    eps = [0.1 * 2 ** -k for k in range(5)]
    lim, err = richardson_limit([(e, e ** (2 / 3) * (5 + e)) for e in eps], 2 / 3)
    assert lim == pytest.approx(5, abs=1e-10)
    lim, err = richardson_limit([(e, e ** (2 / 3) * (5 + e ** (1 / 3))) for e in eps], 2 / 3)
    assert abs(lim - 5) <= max(err, 1e-12)
    lim, err = richardson_limit([(e, e ** (2 / 3) * (2 + e - 3 * e ** (4 / 3))) for e in eps[:4]], 2 / 3,
                                powers=(1, 4 / 3, 2))
    assert lim == pytest.approx(2, abs=1e-6)


def test_richardson_failure():
    eps = [0.1 * 2 ** -k for k in range(4)]
    with pytest.raises(ExtrapolationError):
        richardson_limit([(e, e ** (2 / 3) * (1 + 1 / e)) for e in eps], 2 / 3)
    with pytest.raises(ValueError):
        richardson_limit([(0.1, 1.0), (0.05, 1.0)], 2 / 3)
