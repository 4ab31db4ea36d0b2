"""Special functions and quadrature kernels.

Gauss-Jacobi rules absorb the algebraic endpoint singularities of the screened
vertex-operator integrands; complex powers are evaluated on a branch that is
tracked continuously along each integration path.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

__all__ = [
    "ContourDeformationRequired",
    "ExtrapolationError",
    "JacobiRule",
    "PowerFactor",
    "Segment",
    "gamma_fn",
    "graded_rule",
    "hyp2f1",
    "jacobi_rule",
    "path_integral",
    "path_rule",
    "richardson_limit",
    "segment_integral",
    "segment_nodes",
    "tracked_power",
]


class ContourDeformationRequired(ValueError):
    """A singularity sits (almost) on an integration segment."""

    def __init__(self, message, point=None, segment=None):
        super().__init__(message)
        self.point = point
        self.segment = segment


class ExtrapolationError(ArithmeticError):
    pass


def gamma_fn(x):
    """Gamma function for real or complex arguments; raises at the poles."""
    xc = complex(x)
    if xc.imag == 0 and xc.real <= 0 and xc.real == math.floor(xc.real):
        raise ValueError(f"Gamma has a pole at {x}")
    return complex(special.gamma(xc))


def hyp2f1(a: float, b: float, c: float, x: float) -> float:
    """Gauss hypergeometric function for real x <= 1."""
    if c <= 0 and c == math.floor(c):
        raise ValueError("c must not be a nonpositive integer")
    if x > 1:
        raise ValueError("argument must satisfy x <= 1")
    if x == 1 and c - a - b <= 0:
        raise ValueError("2F1 diverges at x=1 when c-a-b <= 0")
    val = float(special.hyp2f1(a, b, c, x))
    if not math.isfinite(val):
        raise ArithmeticError(f"2F1({a},{b};{c};{x}) did not converge")
    return val


@dataclass(frozen=True)
class JacobiRule:
    """Gauss-Jacobi rule for the weight (1-t)^alpha_exp (1+t)^beta_exp on [-1, 1]."""

    order: int
    alpha_exp: float
    beta_exp: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)


@functools.lru_cache(maxsize=256)
def jacobi_rule(order: int, alpha_exp: float = 0.0, beta_exp: float = 0.0) -> JacobiRule:
    if order < 1:
        raise ValueError("order must be >= 1")
    if alpha_exp <= -1 or beta_exp <= -1:
        raise ValueError("Jacobi exponents must exceed -1")
    if alpha_exp == 0 and beta_exp == 0:
        t, w = special.roots_legendre(order)
    else:
        t, w = special.roots_jacobi(order, alpha_exp, beta_exp)
    t = np.asarray(t, float)
    w = np.asarray(w, float)
    t.setflags(write=False)
    w.setflags(write=False)
    return JacobiRule(order, float(alpha_exp), float(beta_exp), t, w)


@dataclass(frozen=True)
class PowerFactor:
    """The factor (u - base_point)**exponent."""

    base_point: complex
    exponent: float


@dataclass(frozen=True)
class Segment:
    """Straight piece a -> b.

    ``branch_anchor`` optionally gives, per power factor, the reference value of
    arg(u - p) at the start of the segment; the branch is the one continued
    from there. Without an anchor the principal argument at the midpoint is used.
    """

    a: complex
    b: complex
    branch_anchor: tuple | None = None

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("segment endpoints coincide")

    @property
    def length(self) -> float:
        return abs(self.b - self.a)


def _unwrap_from(args: np.ndarray, start: int, ref: float) -> np.ndarray:
    """Unwrap a sequence of principal arguments and pin index ``start`` near ``ref``."""
    out = np.unwrap(args)
    shift = ref - out[start]
    out = out + 2 * np.pi * np.round(shift / (2 * np.pi))
    return out


def tracked_power(u: np.ndarray, base: complex, exponent: float, ref_arg: float | None = None,
                  ref_index: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(u - base)**exponent along an ordered sample ``u`` with a continuous branch.

    Returns the values and the tracked arguments. Without ``ref_arg`` the
    argument at the middle sample is principal.
    """
    d = np.asarray(u, complex) - base
    args = np.angle(d)
    mid = len(d) // 2 if ref_index is None else ref_index
    if ref_arg is None:
        ref_arg = float(args[mid])
    args = _unwrap_from(args, mid, ref_arg)
    return np.abs(d) ** exponent * np.exp(1j * exponent * args), args


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    d = b - a
    t = ((p - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def segment_nodes(factors: Sequence[PowerFactor], polynomial_part: Callable | None,
                  seg: Segment, rule: JacobiRule, d_min_rel: float = 1e-3):
    """Nodes and effective complex weights of the rule mapped onto ``seg``.

    Summing the weights gives the integral of prod (u - p_j)^{e_j} * poly(u);
    they are exposed separately for tensor-product quadrature. Also returns
    the tracked argument of each factor at the segment end.
    """
    a, b = complex(seg.a), complex(seg.b)
    L = abs(b - a)
    half = (b - a) / 2
    t = rule.nodes
    u = (a + b) / 2 + half * t
    # ordered sample: start, nodes..., end (for branch tracking)
    anchors = seg.branch_anchor or (None,) * len(factors)
    if len(anchors) != len(factors):
        raise ValueError("branch_anchor must give one entry per factor")
    val = np.ones_like(u, dtype=complex)
    end_args = []
    absorbed_a = absorbed_b = False
    for f, ref in zip(factors, anchors):
        p = complex(f.base_point)
        e = float(f.exponent)
        tol = 1e-12 * max(1.0, L)
        if abs(p - a) <= tol:
            if not math.isclose(e, rule.beta_exp, abs_tol=1e-12):
                raise ValueError("endpoint exponent at a does not match rule.beta_exp")
            arg = math.atan2(half.imag, half.real)
            if ref is not None:
                arg += 2 * math.pi * round((ref - arg) / (2 * math.pi))
            val = val * np.exp(1j * e * arg)
            absorbed_a = True
            end_args.append(arg)
        elif abs(p - b) <= tol:
            if not math.isclose(e, rule.alpha_exp, abs_tol=1e-12):
                raise ValueError("endpoint exponent at b does not match rule.alpha_exp")
            arg = math.atan2(-half.imag, -half.real)
            if ref is not None:
                arg += 2 * math.pi * round((ref - arg) / (2 * math.pi))
            val = val * np.exp(1j * e * arg)
            absorbed_b = True
            end_args.append(arg)
        elif e == int(e):
            val = val * (u - p) ** int(e)
            end_args.append(math.atan2((b - p).imag, (b - p).real))
        else:
            if _segment_distance(p, a, b) < d_min_rel * L:
                raise ContourDeformationRequired(
                    f"singularity {p} within {d_min_rel}*length of segment {a}->{b}",
                    point=p, segment=seg)
            sample = np.concatenate(([a], u, [b]))
            if ref is None:
                mid = (a + b) / 2
                j = int(np.argmin(np.abs(sample - mid)))
                powv, args = tracked_power(sample, p, e, ref_arg=math.atan2((mid - p).imag, (mid - p).real),
                                           ref_index=j)
            else:
                powv, args = tracked_power(sample, p, e, ref_arg=ref, ref_index=0)
            steps = np.abs(np.diff(args))
            if steps.size and steps.max() > np.pi / 2:
                raise ContourDeformationRequired("branch tracking lost continuity", point=p, segment=seg)
            val = val * powv[1:-1]
            end_args.append(float(args[-1]))
    if rule.alpha_exp != 0 and not absorbed_b:
        raise ValueError("rule has an endpoint exponent at b but no matching factor")
    if rule.beta_exp != 0 and not absorbed_a:
        raise ValueError("rule has an endpoint exponent at a but no matching factor")
    if polynomial_part is not None:
        val = val * np.asarray(polynomial_part(u), complex)
    scale = half * abs(half) ** (rule.alpha_exp + rule.beta_exp)
    return u, scale * rule.weights * val, end_args


def segment_integral(factors: Sequence[PowerFactor], polynomial_part: Callable | None,
                     seg: Segment, rule: JacobiRule, d_min_rel: float = 1e-3,
                     return_args: bool = False):
    """Integrate prod (u - p_j)^{e_j} * poly(u) along the straight segment a -> b.

    Factors whose base point is an endpoint must carry the exponent absorbed by
    the rule (alpha_exp at b, beta_exp at a).
    """
    _, w, end_args = segment_nodes(factors, polynomial_part, seg, rule, d_min_rel)
    res = complex(math.fsum(w.real) + 1j * math.fsum(w.imag))
    if return_args:
        return res, end_args
    return res


def path_integral(factors: Sequence[PowerFactor], polynomial_part: Callable | None,
                  vertices: Sequence[complex], order: int, anchors: Sequence | None = None,
                  d_min_rel: float = 1e-3) -> complex:
    """Integrate along the polyline through ``vertices`` with one continuous branch.

    Endpoint singularities of the path are absorbed into Gauss-Jacobi weights on
    the first and last legs; the branch of each factor is carried across bends.
    """
    vertices = [complex(v) for v in vertices]
    if len(vertices) < 2:
        raise ValueError("need at least two vertices")
    start, end = vertices[0], vertices[-1]
    refs = list(anchors) if anchors is not None else None
    total = 0j
    nleg = len(vertices) - 1
    for k in range(nleg):
        a, b = vertices[k], vertices[k + 1]
        scale = max(1.0, abs(b - a))
        beta = alpha = 0.0
        for f in factors:
            if k == 0 and abs(f.base_point - start) < 1e-12 * scale:
                beta = f.exponent
            if k == nleg - 1 and abs(f.base_point - end) < 1e-12 * scale:
                alpha = f.exponent
        seg = Segment(a, b, tuple(refs) if refs is not None else None)
        val, refs = segment_integral(factors, polynomial_part, seg, jacobi_rule(order, alpha, beta),
                                     d_min_rel=d_min_rel, return_args=True)
        total += val
    return total


def path_rule(vertices: Sequence[complex], order: int, start_exponent: float = 0.0,
              end_exponent: float = 0.0):
    """Nodes, complex weights (including du) and leg index for a polyline.

    The returned weights integrate f(u) * |u - start|^{-start_exponent}... i.e. the
    algebraic endpoint magnitudes are divided out at the nodes, so the caller
    evaluates the *full* integrand at the nodes.
    """
    vertices = [complex(v) for v in vertices]
    us, ws = [], []
    nleg = len(vertices) - 1
    for k in range(nleg):
        a, b = vertices[k], vertices[k + 1]
        beta = start_exponent if k == 0 else 0.0
        alpha = end_exponent if k == nleg - 1 else 0.0
        rule = jacobi_rule(order, alpha, beta)
        half = (b - a) / 2
        u = (a + b) / 2 + half * rule.nodes
        w = rule.weights * half
        w = w / ((1 - rule.nodes) ** alpha * (1 + rule.nodes) ** beta)
        us.append(u)
        ws.append(w)
    return np.concatenate(us), np.concatenate(ws)


def graded_rule(lo: float, hi: float, order: int, end_exponents=(0.0, 0.0),
                singular_points: Sequence[tuple[float, float]] = (),
                near_points: Sequence[tuple[float, float]] = (), panel_order: int | None = None,
                grading: float = 3.0):
    """Composite rule on [lo, hi] for integrands with algebraic singularities.

    ``end_exponents`` are the exponents of |s - lo| and |hi - s|;
    ``singular_points`` are interior (position, exponent) pairs; ``near_points``
    are (position, distance) pairs of complex singularities at that distance
    from the interval, towards which panels are graded geometrically.

    The weights are for the *full* integrand (singular magnitudes divided out).
    """
    if hi <= lo:
        raise ValueError("empty interval")
    panel_order = panel_order or max(8, order // 2)
    span = hi - lo
    brk = {lo: end_exponents[0], hi: end_exponents[1]}
    for pos, ex in singular_points:
        if lo < pos < hi:
            brk[pos] = ex
    cuts = set(brk)
    # one geometric ladder per location, driven by the closest singularity there
    closest: dict[float, float] = {}
    for pos, dist in near_points:
        if dist <= 0 or dist > 0.25 * span:
            continue
        pos = min(hi, max(lo, pos))
        key = next((k for k in closest if abs(k - pos) <= 1e-12 * span), pos)
        closest[key] = min(dist, closest.get(key, math.inf))
    def clear_of_breaks(c, h):
        # a cut just short of a singular break leaves an unresolvable panel
        return all(abs(c - b) >= 0.25 * h for b in brk)

    for pos, dist in closest.items():
        if clear_of_breaks(pos, dist):
            cuts.add(pos)
        h = dist
        while h < 0.25 * span:
            for c in (pos - h, pos + h):
                if lo < c < hi and clear_of_breaks(c, h):
                    cuts.add(c)
            h *= grading
    cuts = sorted(cuts)
    # drop slivers
    clean = [cuts[0]]
    for c in cuts[1:]:
        if c - clean[-1] > 1e-14 * span or c in brk:
            clean.append(c)
    cuts = clean
    graded = len(cuts) > 2
    us, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        beta = brk.get(a, 0.0)
        alpha = brk.get(b, 0.0)
        n = panel_order if graded else order
        if graded and (b - a) > 0.2 * span:
            n = order
        rule = jacobi_rule(n, alpha, beta)
        half = (b - a) / 2
        s = (a + b) / 2 + half * rule.nodes
        w = rule.weights * half / ((1 - rule.nodes) ** alpha * (1 + rule.nodes) ** beta)
        us.append(s)
        ws.append(w)
    return np.concatenate(us), np.concatenate(ws)


def richardson_limit(samples: Sequence[tuple[float, float]], exponent: float,
                     correction_step: float = 1.0 / 3.0, max_rel_error: float = 0.25,
                     powers: Sequence[float] | None = None):
    """Extrapolate lim_{eps->0} value / eps**exponent.

    The scaled values are fitted exactly by L + sum_j a_j eps^(p_j) through all
    samples, with p_j = j * correction_step unless explicit correction
    ``powers`` are given. The error estimate is the change in L when the
    largest eps is dropped.
    """
    pts = sorted(((float(e), float(v)) for e, v in samples), key=lambda p: -p[0])
    if len(pts) < 3:
        raise ValueError("need at least three samples")
    eps = np.array([p[0] for p in pts])
    if np.any(eps <= 0):
        raise ValueError("eps must be positive")
    scaled = np.array([p[1] for p in pts]) / eps ** exponent
    if not np.all(np.isfinite(scaled)):
        raise ExtrapolationError("non-finite samples")
    diffs = np.abs(np.diff(scaled))
    if len(diffs) >= 2 and diffs[-1] > diffs[0] and diffs[-1] > 1e-12 * np.abs(scaled).max():
        raise ExtrapolationError("Richardson sequence diverges")
    if powers is None:
        powers = [j * correction_step for j in range(1, len(pts))]

    def fit(e, r):
        m = len(e)
        if len(powers) < m - 1:
            raise ValueError("not enough correction powers for the samples")
        A = np.column_stack([np.ones(m)] + [e ** p for p in powers[:m - 1]])
        return np.linalg.solve(A, r)[0]

    limit = fit(eps, scaled)
    prev = fit(eps[1:], scaled[1:])
    err = abs(limit - prev)
    if err > max_rel_error * abs(limit):
        raise ExtrapolationError(f"extrapolation error {err:.3g} too large for limit {limit:.3g}")
    return float(limit), float(err)
