"""Screened vertex-operator correlators.

H_n(z_1, zbar_1, ..., z_n, zbar_n; x1, x2) / H0 is represented with one
screening contour per bulk pair, each joining z_k to zbar_k. Two equivalent
evaluations are provided:

* ``jn_integral`` works in the cross-ratio plane eta(s) with straight
  contours 0 -> eta_1, eta_2 -> eta_3, ... and midpoint-principal branches.
* ``hn_cg`` works in the canonical frame (0, inf) itself, where the same
  contours become the vertical segments z_k -> zbar_k. There every factor can
  be written with a positive real part, so the branch is fixed once and for all
  and the integrand is conjugation symmetric. The n-fold integral factorizes
  into one-dimensional weight vectors and pairwise coupling matrices.
"""

from __future__ import annotations

import cmath
import math
import string
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .closed_forms import CorrelatorValue
from .core_cft import (CANONICAL, BoundaryFrame, KacLabel, alpha_minus, alpha_plus, as_points,
                       charge_of, check_kappa, check_point, cross_ratio, neutrality_defect,
                       twist_weight)
from .numerics import (PowerFactor, Segment, gamma_fn, graded_rule, jacobi_rule, segment_integral,
                       segment_nodes)

MAX_TENSOR_POINTS = 4


class ConvergenceError(ArithmeticError):
    """An integral in the requested representation does not converge."""


# -- block bookkeeping ---------------------------------------------------------

@dataclass(frozen=True)
class VertexInsertion:
    position: complex
    label: KacLabel
    kappa: float = 8 / 3

    @property
    def charge(self) -> float:
        return charge_of(self.label, self.kappa)


@dataclass(frozen=True)
class ScreeningContour:
    endpoints: tuple[complex, complex]
    sign: str = "-"
    path: tuple[Segment, ...] = ()

    def __post_init__(self):
        if self.sign not in "+-" or len(self.sign) != 1:
            raise ValueError("sign must be '+' or '-'")
        if not self.path:
            object.__setattr__(self, "path", (Segment(*self.endpoints),))
        if self.path[0].a != self.endpoints[0] or self.path[-1].b != self.endpoints[1]:
            raise ValueError("path does not join the contour endpoints")

    def charge(self, kappa: float) -> float:
        return alpha_plus(kappa) if self.sign == "+" else alpha_minus(kappa)


@dataclass(frozen=True)
class BlockSpec:
    insertions: tuple[VertexInsertion, ...]
    contours: tuple[ScreeningContour, ...] = ()
    frame: BoundaryFrame = CANONICAL
    kappa: float = 8 / 3
    charges: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self):
        ch = [v.charge for v in self.insertions] + [c.charge(self.kappa) for c in self.contours]
        defect = neutrality_defect(ch, self.kappa)
        if abs(defect) > 1e-12:
            raise ValueError(f"block violates charge neutrality (defect {defect:.3g})")
        object.__setattr__(self, "charges", tuple(ch))


def integrand(spec: BlockSpec, u: Sequence[complex]) -> complex:
    """Pairwise vertex-operator product prod (p_i - p_j)^{2 a_i a_j}, principal branches.

    Insertions at infinity are dropped, which is the usual normalization of
    a charge sent to infinity.
    """
    if len(u) != len(spec.contours):
        raise ValueError("need one variable per screening contour")
    pos = [v.position for v in spec.insertions] + [complex(x) for x in u]
    ch = spec.charges
    out = 1 + 0j
    for i in range(len(pos)):
        if isinstance(pos[i], float) and math.isinf(pos[i]):
            continue
        for j in range(i + 1, len(pos)):
            if isinstance(pos[j], float) and math.isinf(pos[j]):
                continue
            d = complex(pos[i]) - complex(pos[j])
            if d == 0:
                raise ValueError("coincident points in the integrand")
            out *= d ** (2 * ch[i] * ch[j])
    return out


def one_point_block(eta: complex, kappa: float = 8 / 3) -> BlockSpec:
    """The n=1 block in the frame z -> 0, zbar -> eta, x1 -> 1, x2 -> inf."""
    return BlockSpec(
        (VertexInsertion(0j, KacLabel(2, 1), kappa), VertexInsertion(complex(eta), KacLabel(2, 1), kappa),
         VertexInsertion(1 + 0j, KacLabel(1, 2), kappa), VertexInsertion(math.inf, KacLabel(-1, -2), kappa)),
        (ScreeningContour((0j, complex(eta))),), kappa=kappa)


def n1_constant(kappa: float) -> complex:
    """Normalization N_1; N_n = N_1**n."""
    if not kappa < 4:
        raise ValueError("N_1 needs kappa < 4")
    return cmath.exp(2j * math.pi * twist_weight(kappa)) * gamma_fn(2 - kappa / 2) / gamma_fn(1 - kappa / 4) ** 2


# -- eta-plane route -------------------------------------------------------------

def _j1_raw(eta: complex, kappa: float, order: int) -> complex:
    e = -kappa / 4
    arg = cmath.phase(eta)
    seg = Segment(0j, eta, branch_anchor=(arg, arg - math.pi))
    return segment_integral([PowerFactor(0j, e), PowerFactor(eta, e)], lambda u: 1 - u, seg,
                            jacobi_rule(order, e, e))


_H1_PHASES: dict[float, complex] = {}


def _h1_eta_value(w: complex, kappa: float, order: int) -> complex:
    eta = cross_ratio(w.conjugate(), w, CANONICAL)
    j1 = _j1_raw(eta, kappa, order)
    sq = w.conjugate() / abs(w)  # sqrt(1 - eta) continued from the first quadrant
    return (2 * w.imag) ** (1 - 3 * kappa / 8) * n1_constant(kappa) * eta ** (kappa / 2 - 1) * j1 / sq


def _h1_phase(kappa: float) -> complex:
    ph = _H1_PHASES.get(kappa)
    if ph is None:
        ref = _h1_eta_value(1 + 1j, kappa, 64)
        ph = abs(ref) / ref
        _H1_PHASES[kappa] = ph
    return ph


def h1_cg(z: complex, frame: BoundaryFrame = CANONICAL, kappa: float = 8 / 3, order: int = 64) -> CorrelatorValue:
    """H1/H0 from the single-screening integral J1 along 0 -> eta.

    The global phase is fixed once per kappa by requiring a real positive value
    at z = 1+i in the canonical frame.
    """
    kappa = check_kappa(kappa)
    z = check_point(z)
    w, dfz = frame.to_canonical(z)
    val = dfz ** (2 * twist_weight(kappa)) * _h1_phase(kappa) * _h1_eta_value(w, kappa, order)
    return CorrelatorValue(val, frame, "calibrated:h1(1+i)>0", abs(val.imag))


def jn_integral(etas: Sequence[complex], kappa: float = 8 / 3, order: int = 32) -> complex:
    """J_n over contours 0 -> eta_1, eta_2 -> eta_3, ..., eta_{2n-2} -> eta_{2n-1}.

    Each variable carries u^{-kappa/4} (1-u) prod_k (u - eta_k)^{-kappa/4};
    each pair carries (u_i - u_j)^{kappa/2}. Branches are principal at the
    segment midpoints and continued along the segments; pair factors are pinned
    to the argument of the difference of midpoints.
    """
    etas = [complex(e) for e in etas]
    if len(etas) % 2 != 1:
        raise ValueError("need 2n-1 cross-ratios")
    n = (len(etas) + 1) // 2
    if n > 3:
        raise ValueError("tensor-product J_n is limited to n <= 3")
    e = -kappa / 4
    points = [0j] + etas
    rule = jacobi_rule(order, e, e)
    nodes, wts, mids = [], [], []
    for i in range(n):
        a, b = points[2 * i], points[2 * i + 1]
        factors = [PowerFactor(p, e) for p in points] + [PowerFactor(1 + 0j, 1.0)]
        u, w, _ = segment_nodes(factors, None, Segment(a, b), rule)
        # (u - 1)^1 -> (1 - u)
        nodes.append(u)
        wts.append(-w)
        mids.append((a + b) / 2)
    letters = string.ascii_lowercase
    operands, subs = [], []
    for i in range(n):
        operands.append(wts[i])
        subs.append(letters[i])
    for i in range(n):
        for j in range(i + 1, n):
            d = nodes[i][:, None] - nodes[j][None, :]
            ref = cmath.phase(mids[i] - mids[j])
            arg = np.angle(d)
            arg = arg + 2 * np.pi * np.round((ref - arg) / (2 * np.pi))
            operands.append(np.abs(d) ** (kappa / 2) * np.exp(1j * (kappa / 2) * arg))
            subs.append(letters[i] + letters[j])
    return complex(np.einsum(",".join(subs) + "->", *operands, optimize=True))


# -- canonical-frame route -------------------------------------------------------

def _hn_prefactor(zs: Sequence[complex], kappa: float) -> float:
    a = 1 - kappa / 4
    c = 2 ** (1 - kappa / 2) / special.beta(0.5, a)
    out = c ** len(zs)
    for z in zs:
        out *= (2 * z.imag) ** (kappa / 8) / abs(z)
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            out *= (abs(zs[i] - zs[j]) * abs(zs[i] - zs[j].conjugate())) ** (kappa / 4)
    return out


def _orient(k: int, l: int, dx: float) -> float:
    if dx != 0:
        return math.copysign(1.0, dx)
    return 1.0 if k > l else -1.0


def _foreign(s: np.ndarray, k: int, zs: Sequence[complex], kappa: float) -> np.ndarray:
    """prod over l != k of the factors pairing variable k with z_l and zbar_l."""
    out = np.ones_like(s, dtype=complex)
    xk = zs[k].real
    for l, zl in enumerate(zs):
        if l == k:
            continue
        dx = xk - zl.real
        sg = _orient(k, l, dx)
        out *= (abs(dx) + 1j * sg * (s + zl.imag)) ** (-kappa / 4)
        out *= (abs(dx) + 1j * sg * (s - zl.imag)) ** (-kappa / 4)
    return out


def _coupling(sk: np.ndarray, sl: np.ndarray, k: int, l: int, zs, kappa: float) -> np.ndarray:
    dx = zs[k].real - zs[l].real
    sg = _orient(k, l, dx)
    return (abs(dx) + 1j * sg * (sk[:, None] - sl[None, :])) ** (kappa / 2)


def _variable_rule(k: int, zs: Sequence[complex], kappa: float, order: int):
    yk, xk = zs[k].imag, zs[k].real
    e = -kappa / 4
    singular, near = [], []
    for l, zl in enumerate(zs):
        if l == k:
            continue
        dx = abs(xk - zl.real)
        yl = zl.imag
        if dx == 0 and yl == yk:
            raise ValueError("coincident points")
        gap = max(0.0, yl - yk)
        for pos in (yl, -yl):
            if dx == 0 and gap == 0:
                singular.append((pos, e))
            else:
                near.append((pos, math.hypot(dx, gap)))
    return graded_rule(-yk, yk, order, (e, e), singular, near)


def _contract(F: list[np.ndarray], C: dict[tuple[int, int], np.ndarray]) -> complex:
    n = len(F)
    if n == 1:
        return complex(F[0].sum())
    if n <= 3:
        letters = string.ascii_lowercase
        ops, subs = list(F), [letters[i] for i in range(n)]
        for (i, j), m in C.items():
            ops.append(m)
            subs.append(letters[i] + letters[j])
        return complex(np.einsum(",".join(subs) + "->", *ops, optimize=True))
    # peel off the first variable node by node
    total = 0j
    rest = {(i - 1, j - 1): m for (i, j), m in C.items() if i > 0}
    for a in range(len(F[0])):
        Fa = [F[j] * C[(0, j)][a] for j in range(1, n)]
        total += F[0][a] * _contract(Fa, rest)
    return total


def _hn_tensor(zs, kappa, order):
    n = len(zs)
    nodes, F = [], []
    for k in range(n):
        s, w = _variable_rule(k, zs, kappa, order)
        nodes.append(s)
        edge = (zs[k].imag ** 2 - s * s) ** (-kappa / 4)
        F.append(w * edge * (zs[k].real + 1j * s) * _foreign(s, k, zs, kappa))
    C = {(k, l): _coupling(nodes[k], nodes[l], k, l, zs, kappa) for k in range(n) for l in range(k + 1, n)}
    return _contract(F, C)


def _hn_montecarlo(zs, kappa, samples, seed):
    """Importance sampling with the endpoint Beta weights as proposal."""
    n = len(zs)
    a = 1 - kappa / 4
    rng = np.random.default_rng(seed)
    S = np.stack([z.imag * (2 * rng.beta(a, a, samples) - 1) for z in zs])
    norm = 1.0
    for z in zs:
        norm *= z.imag ** (2 * a - 1) * 2 ** (2 * a - 1) * special.beta(a, a)
    vals = np.ones(samples, dtype=complex)
    for k in range(n):
        vals *= (zs[k].real + 1j * S[k]) * _foreign(S[k], k, zs, kappa)
        for l in range(k + 1, n):
            dx = zs[k].real - zs[l].real
            sg = _orient(k, l, dx)
            vals *= (abs(dx) + 1j * sg * (S[k] - S[l])) ** (kappa / 2)
    mean = vals.mean()
    err = norm * np.sqrt(vals.real.var() / samples)
    return norm * mean, float(err)


def hn_cg(points: Sequence[complex], frame: BoundaryFrame = CANONICAL, kappa: float = 8 / 3,
          order: int = 48, mc_samples: int = 400_000, seed: int = 0) -> CorrelatorValue:
    """H_n/H0 with each screening contour joining z_k to zbar_k.

    Up to four points use tensor-product quadrature with panels graded toward
    nearly coincident singularities; more points use Monte Carlo and report
    a statistical error.
    """
    kappa = check_kappa(kappa)
    zs = as_points(points)
    if len(set(zs)) != len(zs):
        raise ValueError("points must be distinct")
    if not zs:
        return CorrelatorValue(1 + 0j, frame, "identity")
    mapped = [frame.to_canonical(z) for z in zs]
    ws = [m[0] for m in mapped]
    jac = 1.0
    for _, d in mapped:
        jac *= d ** (2 * twist_weight(kappa))
    pref = jac * _hn_prefactor(ws, kappa)
    if len(ws) <= MAX_TENSOR_POINTS:
        raw = _hn_tensor(ws, kappa, order)
        err = abs(pref * raw.imag)
        tag = "conjugation-symmetric"
    else:
        raw, err = _hn_montecarlo(ws, kappa, mc_samples, seed)
        err = pref * err + abs(pref * raw.imag)
        tag = "conjugation-symmetric:mc"
    return CorrelatorValue(complex(pref * raw.real), frame, tag, err)


# -- Green's function blocks -----------------------------------------------------

def green1_block(z: complex, frame: BoundaryFrame = CANONICAL, order: int = 64) -> complex:
    """One-point Phi_{3,1} block at kappa = 8/3, normalized as (Im z)^{-2/3} eta^2 / (4 (1 - eta)).

    The screening integrand u^{-1} (1-u)^{-3/2} (u - eta)^2 has an integer
    exponent at u = 0, so the closed contour around 0 and eta reduces to a
    small loop around u = 0, evaluated here with the trapezoid rule.
    """
    z = check_point(z)
    w, dfz = frame.to_canonical(z)
    eta = cross_ratio(w.conjugate(), w, CANONICAL)
    r = 0.5 * min(abs(eta), 1.0)
    th = 2 * np.pi * np.arange(order) / order
    u = r * np.exp(1j * th)
    vals = u ** -1 * (1 - u) ** -1.5 * (u - eta) ** 2 * 1j * u
    loop = vals.mean() * 2 * np.pi / (2j * np.pi)
    return complex(dfz ** (2 / 3) * w.imag ** (-2 / 3) * loop / (4 * (1 - eta)))


_I3_EXPONENTS = {"pair": 4 / 3, "leg": 1.0, "origin": -2 / 3, "eta": -2 / 3}


def i3_tail_exponent(exponents: dict = _I3_EXPONENTS, variables: int = 4, points: int = 3) -> float:
    """Power of u_1 governing the integrand of I_3 as u_1 -> infinity."""
    return (exponents["pair"] * (variables - 1) + exponents["leg"] + exponents["origin"]
            + exponents["eta"] * points)


def green2_block(z: complex, w: complex, frame: BoundaryFrame = CANONICAL, order: int = 24) -> complex:
    """Two-point block through the four-fold integral I_3 with u_1, u_2 on (1, inf).

    The integral is only attempted when the semi-infinite legs converge; for
    the exponents of the block as written they do not, and ConvergenceError
    is raised.
    """
    check_point(z)
    check_point(w)
    if z == w:
        raise ValueError("points must be distinct")
    p = i3_tail_exponent()
    if p >= -1:
        raise ConvergenceError(
            f"I_3 integrand grows like u^{p:.4g} on the legs (1, inf); the integral diverges")
    raise NotImplementedError  # pragma: no cover - unreachable with the exponents above
