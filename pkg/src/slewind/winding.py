"""Winding patterns of the trace about marked points.

With H_I denoting H_{|I|}(points in I)/H0, the weight of the pattern in which
the points of S are separated from [x1, x2] is

    Pi_S / H0 = 2^{-N} sum_I (-1)^{|I n S|} H_I ,

a Walsh-Hadamard transform over subsets. Bit i of a subset index refers to
point i.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core_cft import CANONICAL, BoundaryFrame, as_points

MAX_POINTS = 16
WEIGHT_TOL = 1e-9


class InconsistencyError(ArithmeticError):
    """Weights fall outside [0, H0] beyond numerical slack."""


@dataclass(frozen=True)
class WindingPattern:
    separated: int
    n_points: int

    def __post_init__(self):
        if not 0 <= self.n_points <= MAX_POINTS:
            raise ValueError(f"at most {MAX_POINTS} points")
        if not 0 <= self.separated < (1 << self.n_points):
            raise ValueError("bitmask out of range")

    @classmethod
    def from_indices(cls, indices, n_points: int) -> "WindingPattern":
        mask = 0
        for i in indices:
            mask |= 1 << i
        return cls(mask, n_points)

    def indices(self) -> list[int]:
        return [i for i in range(self.n_points) if self.separated >> i & 1]


@dataclass(frozen=True)
class WeightVector:
    weights: np.ndarray
    h0: float = 1.0

    @property
    def n_points(self) -> int:
        return int(self.weights.size).bit_length() - 1


def _walsh_hadamard(v: np.ndarray) -> np.ndarray:
    v = np.array(v, dtype=float)
    n = v.size
    h = 1
    while h < n:
        v = v.reshape(-1, 2, h)
        v = np.stack((v[:, 0] + v[:, 1], v[:, 0] - v[:, 1]), axis=1).reshape(n)
        h *= 2
    return v


def _check_len(size: int) -> int:
    n = size.bit_length() - 1
    if size < 1 or (1 << n) != size:
        raise ValueError("need one value per subset (length 2^N)")
    if n > MAX_POINTS:
        raise ValueError(f"at most {MAX_POINTS} points")
    return n


def correlators_to_weights(h: Sequence[float], h0: float = 1.0) -> WeightVector:
    """Weights Pi_S (times H0) from subset-indexed correlator ratios, h[0] = 1."""
    h = np.asarray(h, dtype=float)
    if np.any(~np.isfinite(h)):
        raise ValueError("missing or non-finite subset value")
    n = _check_len(h.size)
    return WeightVector(h0 * _walsh_hadamard(h) / (1 << n), h0)


def reassemble(wv: WeightVector) -> np.ndarray:
    """Correlator ratios back from the weights: H_I = sum_S (-1)^{|I n S|} Pi_S / H0."""
    return _walsh_hadamard(wv.weights) / wv.h0


# Map from the transform's bit convention to the geometric event "trace passes
# to the left of z". Fixed once by the one-point probability at z = 1+i, which
# must exceed 1/2.
@functools.lru_cache(maxsize=None)
def _orientation_flips() -> bool:
    from .closed_forms import h1_closed

    w = correlators_to_weights([1.0, h1_closed(1 + 1j).real])
    return w.weights[1] < 0.5


def geometric_mask(pattern: WindingPattern) -> int:
    """Subset index in the transform's convention for a pattern."""
    if _orientation_flips():
        return pattern.separated ^ ((1 << pattern.n_points) - 1)
    return pattern.separated


def pattern_probability(wv: WeightVector, pattern: WindingPattern, tol: float = WEIGHT_TOL) -> float:
    if pattern.n_points != wv.n_points:
        raise ValueError("pattern and weight vector disagree on N")
    p = wv.weights[geometric_mask(pattern)] / wv.h0
    if p < -tol or p > 1 + tol:
        raise InconsistencyError(f"pattern weight {p:.3g} outside [0, 1]; quadrature too coarse?")
    return float(min(1.0, max(0.0, p)))


def all_probabilities(wv: WeightVector, tol: float = WEIGHT_TOL) -> np.ndarray:
    n = wv.n_points
    return np.array([pattern_probability(wv, WindingPattern(m, n), tol) for m in range(1 << n)])


def _subsets(n: int):
    for mask in range(1 << n):
        yield mask, [i for i in range(n) if mask >> i & 1]


def compute_weights(points: Sequence[complex], frame: BoundaryFrame = CANONICAL, kappa: float = 8 / 3,
                    order: int = 48, threads: int = 1,
                    correlator: Callable | None = None) -> tuple[WeightVector, np.ndarray]:
    """Evaluate H_I for every subset (in parallel when threads > 1) and transform.

    Returns the weight vector and per-subset error estimates.
    """
    zs = tuple(as_points(points))
    _check_len(1 << len(zs))
    if correlator is None:
        correlator = _cached_correlator
    masks = list(_subsets(len(zs)))

    def one(item):
        _, idx = item
        return correlator(tuple(zs[i] for i in idx), frame, kappa, order)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            vals = list(pool.map(one, masks))
    else:
        vals = [one(m) for m in masks]
    h = np.array([v[0] for v in vals])
    err = np.array([v[1] for v in vals])
    return correlators_to_weights(h), err


@functools.lru_cache(maxsize=4096)
def _cached_correlator(pts: tuple, frame: BoundaryFrame, kappa: float, order: int) -> tuple[float, float]:
    from .closed_forms import h1_closed
    from .coulomb_gas import hn_cg

    if not pts:
        return 1.0, 0.0
    if len(pts) == 1:
        v = h1_closed(pts[0], frame, kappa)
    else:
        v = hn_cg(list(pts), frame, kappa, order)
    return float(v.value.real), float(v.error)


def left_passage(points: Sequence[complex], frame: BoundaryFrame = CANONICAL, order: int = 48) -> float:
    """Probability that the trace passes to the left of every point."""
    wv, _ = compute_weights(points, frame, order=order)
    n = len(points)
    return pattern_probability(wv, WindingPattern((1 << n) - 1, n))


def passage_between(pairs: Sequence[tuple[complex, complex]], frame: BoundaryFrame = CANONICAL,
                    order: int = 48) -> float:
    """Probability that the trace separates the two points of every pair.

    For m pairs this is 2^{-m} sum over subsets T of pairs of (-1)^{|T|} H_{2|T|}
    evaluated on the union of the pairs in T.
    """
    if not 1 <= len(pairs) <= 2:
        raise ValueError("one or two pairs supported")
    m = len(pairs)
    total = 0.0
    for mask, idx in _subsets(m):
        pts = tuple(p for i in idx for p in pairs[i])
        total += (-1) ** len(idx) * _cached_correlator(tuple(as_points(pts)), frame, 8 / 3, order)[0]
    p = total / 2 ** m
    if p < -WEIGHT_TOL or p > 1 + WEIGHT_TOL:
        raise InconsistencyError(f"passage probability {p:.3g} outside [0, 1]")
    return float(min(1.0, max(0.0, p)))
