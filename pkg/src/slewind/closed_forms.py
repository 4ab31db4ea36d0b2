"""Exact reference formulas.

Schramm's one-point passage probability, the Simmons-Cardy two-point
probability at kappa = 8/3, the boundary two-point function, the closed-form
one-twist correlator and the one-point SLE_{8/3} Green's function. Correlators
are reported as ratios to the boundary two-point function H0, which stay
finite when x2 is sent to infinity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core_cft import CANONICAL, BoundaryFrame, check_point, leg_weight, twist_weight
from .numerics import gamma_fn, hyp2f1


@dataclass(frozen=True)
class CorrelatorValue:
    """A correlator normalized by H0 in the same frame.

    ``branch_tag`` names the phase convention the value was produced under;
    ``error`` is an absolute error estimate (quadrature tail or MC std. error).
    """

    value: complex
    frame: BoundaryFrame = CANONICAL
    branch_tag: str = "real"
    error: float = 0.0

    @property
    def real(self) -> float:
        return float(self.value.real)


def schramm_probability(z: complex, kappa: float = 8 / 3) -> float:
    """Probability that chordal SLE_kappa from 0 to inf passes to the left of z."""
    z = check_point(z)
    if not 0 < kappa < 8:
        raise ValueError("Schramm's formula needs 0 < kappa < 8")
    x, y = z.real, z.imag
    if x == 0:
        return 0.5
    const = gamma_fn(4 / kappa).real / (math.sqrt(math.pi) * gamma_fn((8 - kappa) / (2 * kappa)).real)
    return 0.5 + const * (x / y) * hyp2f1(0.5, 4 / kappa, 1.5, -(x * x) / (y * y))


def _g_sigma(sigma: float) -> float:
    return 1.0 - sigma * hyp2f1(1.0, 4.0 / 3.0, 5.0 / 3.0, 1.0 - sigma)


def simmons_cardy_two_point(z: complex, w: complex) -> float:
    """Probability that the SLE_{8/3} trace passes to the left of both z and w."""
    z, w = check_point(z), check_point(w)
    if z == w:
        raise ValueError("points must be distinct")
    sigma = abs(z - w) ** 2 / abs(z - w.conjugate()) ** 2
    x, y, u, v = z.real, z.imag, w.real, w.imag
    pz = 0.5 + x / (2 * abs(z))
    pw = 0.5 + u / (2 * abs(w))
    return pz * pw * (1 + y / (x + abs(z)) * v / (u + abs(w)) * _g_sigma(sigma))


def h0(frame: BoundaryFrame, kappa: float = 8 / 3) -> CorrelatorValue:
    """Boundary two-point function (x2 - x1)^(-2 h_{1,2}).

    With an anchor at infinity the value is normalized to 1.
    """
    if math.isinf(frame.x1) or math.isinf(frame.x2):
        return CorrelatorValue(1.0 + 0j, frame, "infinity-normalized")
    return CorrelatorValue(complex(abs(frame.x2 - frame.x1) ** (-2 * leg_weight(kappa))), frame, "real")


def _h1_canonical(z: complex, kappa: float) -> float:
    return (2 * z.imag) ** (1 - 3 * kappa / 8) * z.real / abs(z)


def h1_closed(z: complex, frame: BoundaryFrame = CANONICAL, kappa: float = 8 / 3) -> CorrelatorValue:
    """H1(z, zbar; x1, x2) / H0(x1, x2) in closed form.

    In the canonical frame this is (2 Im z)^(1 - 3 kappa/8) cos(arg z); other
    frames are reached by the real Moebius map onto (0, inf), under which the
    ratio transforms with weight h_{2,1} at z and zbar.
    """
    z = check_point(z)
    w, dfz = frame.to_canonical(z)
    value = dfz ** (2 * twist_weight(kappa)) * _h1_canonical(w, kappa)
    return CorrelatorValue(complex(value), frame, "real")


def green1_closed(z: complex, frame: BoundaryFrame = CANONICAL) -> float:
    """One-point SLE_{8/3} Green's function, (Im w)^(-2/3) sin^2(arg w), covariantly mapped."""
    z = check_point(z)
    w, dfz = frame.to_canonical(z)
    return dfz ** (2 / 3) * w.imag ** (-2 / 3) * math.sin(cmath.phase(w)) ** 2


# -- null-state PDE residual --------------------------------------------------

def _h1_holomorphic(z, zs, x1, x2, kappa, refs):
    """H1 with z, z* and x1, x2 as independent complex variables.

    ``refs`` carries reference arguments pinning the branches of the two
    non-integer powers so that finite differences stay on one sheet.
    """
    h21 = twist_weight(kappa)
    h12 = leg_weight(kappa)
    eta = (z - zs) * (x2 - x1) / ((z - x1) * (x2 - zs))
    p1 = _pinned_power(z - zs, -2 * h21, refs[0])
    p2 = _pinned_power(x2 - x1, -2 * h12, refs[1])
    sq = _pinned_power(1 - eta, 0.5, refs[2])
    return p1 * p2 * (2 - eta) / (2 * sq)


def _pinned_power(d: complex, e: float, ref: float) -> complex:
    d = complex(d)
    arg = cmath.phase(d)
    arg += 2 * math.pi * round((ref - arg) / (2 * math.pi))
    return abs(d) ** e * cmath.exp(1j * e * arg)


def pde_residual_h1(z: complex, frame: BoundaryFrame, kappa: float = 8 / 3, step: float = 1e-3) -> float:
    """Relative residual of both second-order null-state equations on the closed-form H1.

    Derivatives are central differences in each (holomorphic) variable; the
    result is max |LHS| / |H1|. Requires a finite frame.
    """
    z = check_point(z)
    if math.isinf(frame.x1) or math.isinf(frame.x2):
        raise ValueError("the PDE residual needs finite boundary anchors")
    h21 = twist_weight(kappa)
    h12 = leg_weight(kappa)
    zs = z.conjugate()
    x1, x2 = complex(frame.x1), complex(frame.x2)
    eta0 = (z - zs) * (x2 - x1) / ((z - x1) * (x2 - zs))
    refs = (cmath.phase(z - zs), cmath.phase(x2 - x1), cmath.phase(1 - eta0))
    v0 = [z, zs, x1, x2]

    def f(v):
        return _h1_holomorphic(v[0], v[1], v[2], v[3], kappa, refs)

    def shifted(i, h):
        v = list(v0)
        v[i] = v[i] + h
        return v

    H = f(v0)

    def d1(i):
        return (f(shifted(i, step)) - f(shifted(i, -step))) / (2 * step)

    def d2(i):
        return (f(shifted(i, step)) - 2 * H + f(shifted(i, -step))) / step ** 2

    dz, dzs, dx1, dx2 = d1(0), d1(1), d1(2), d1(3)
    eq1 = (3 * d2(0) / (2 * (1 + 2 * h21)) - h21 * H / (zs - z) ** 2 + dzs / (zs - z)
           - h12 * H / (x1 - z) ** 2 + dx1 / (x1 - z) - h12 * H / (x2 - z) ** 2 + dx2 / (x2 - z))
    eq2 = (3 * d2(2) / (2 * (1 + 2 * h12)) - h21 * H / (zs - x1) ** 2 + dzs / (zs - x1)
           - h21 * H / (z - x1) ** 2 + dz / (z - x1) - h12 * H / (x2 - x1) ** 2 + dx2 / (x2 - x1))
    return max(abs(eq1), abs(eq2)) / abs(H)
