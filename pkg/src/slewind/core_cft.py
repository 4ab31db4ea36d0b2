"""CFT parameter algebra for the dilute O(n) / SLE_kappa correspondence.

Central charge, Kac weights, Coulomb-gas charges and the cross-ratio used to
reduce half-plane correlators to the canonical boundary frame (0, inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

KAPPA_SAW = 8.0 / 3.0


def check_kappa(kappa: float) -> float:
    """Validate a dilute-phase kappa (2 < kappa <= 4) and return it as float."""
    kappa = float(kappa)
    if not (2.0 < kappa <= 4.0):
        raise ValueError(f"kappa={kappa} outside the dilute range (2, 4]")
    return kappa


@dataclass(frozen=True)
class KacLabel:
    r: int
    s: int

    def __post_init__(self):
        if self.r == 0 or self.s == 0:
            raise ValueError("Kac labels must be nonzero")

    def reflected(self) -> "KacLabel":
        return KacLabel(-self.r, -self.s)


@dataclass(frozen=True)
class BoundaryFrame:
    """Boundary anchors x1, x2 of the trace; either may be ``math.inf``."""

    x1: float = 0.0
    x2: float = math.inf

    def __post_init__(self):
        if self.x1 == self.x2:
            raise ValueError("degenerate boundary frame: x1 == x2")
        if math.isinf(self.x1) and math.isinf(self.x2):
            raise ValueError("at most one boundary anchor may be at infinity")
        for x in (self.x1, self.x2):
            if math.isnan(x) or x == -math.inf:
                raise ValueError("boundary anchors must be real or +inf")

    @property
    def is_canonical(self) -> bool:
        return self.x1 == 0.0 and math.isinf(self.x2)

    def to_canonical(self, z: complex) -> tuple[complex, float]:
        """Real Moebius map sending (x1, x2) -> (0, inf), preserving the half-plane.

        Returns the image point and |f'(z)|.
        """
        z = complex(z)
        x1, x2 = self.x1, self.x2
        if math.isinf(x2):
            return z - x1, 1.0
        if math.isinf(x1):
            return -1.0 / (z - x2), 1.0 / abs(z - x2) ** 2
        sign = 1.0 if x2 > x1 else -1.0
        w = sign * (z - x1) / (x2 - z)
        return w, abs(x2 - x1) / abs(x2 - z) ** 2


CANONICAL = BoundaryFrame(0.0, math.inf)


def check_point(z: complex) -> complex:
    z = complex(z)
    if not z.imag > 0:
        raise ValueError(f"point {z} is not in the upper half-plane")
    return z


def alpha_plus(kappa: float) -> float:
    return 2.0 / math.sqrt(kappa)


def alpha_minus(kappa: float) -> float:
    return -math.sqrt(kappa) / 2.0


def alpha_zero(kappa: float) -> float:
    """Background charge, half the sum of the two screening charges."""
    return 0.5 * (alpha_plus(kappa) + alpha_minus(kappa))


def central_charge(kappa: float) -> float:
    kappa = check_kappa(kappa)
    return (6.0 - kappa) * (3.0 * kappa - 8.0) / (2.0 * kappa)


def central_charge_from_charges(kappa: float) -> float:
    return 1.0 - 24.0 * alpha_zero(kappa) ** 2


def kac_weight(label: KacLabel, kappa: float) -> float:
    r, s = label.r, label.s
    return ((kappa * r - 4.0 * s) ** 2 - (kappa - 4.0) ** 2) / (16.0 * kappa)


def charge_of(label: KacLabel, kappa: float) -> float:
    return 0.5 * (1 - label.r) * alpha_minus(kappa) + 0.5 * (1 - label.s) * alpha_plus(kappa)


def vertex_dimension(alpha: float, kappa: float) -> float:
    return alpha * (alpha - 2.0 * alpha_zero(kappa))


def neutrality_defect(charges: Iterable[float], kappa: float) -> float:
    charges = list(charges)
    if not charges:
        raise ValueError("empty charge list")
    return math.fsum(charges) - 2.0 * alpha_zero(kappa)


def cross_ratio(s: complex, z1: complex, frame: BoundaryFrame) -> complex:
    """Cross-ratio eta(s) sending z1 -> 0, x1 -> 1, x2 -> inf.

    For the canonical frame this is ``1 - s / z1``.
    """
    x1, x2 = frame.x1, frame.x2
    s, z1 = complex(s), complex(z1)
    if math.isinf(x2):
        return (z1 - s) / (z1 - x1)
    if s == x2:
        raise ValueError("cross-ratio undefined at s == x2")
    if math.isinf(x1):
        return (s - z1) / (s - x2)
    return (z1 - s) * (x1 - x2) / ((z1 - x1) * (s - x2))


def twist_weight(kappa: float) -> float:
    return kac_weight(KacLabel(2, 1), kappa)


def leg_weight(kappa: float, legs: int = 1) -> float:
    return legs * (4.0 + 2.0 * legs - kappa) / (2.0 * kappa)


def as_points(points: Sequence[complex]) -> list[complex]:
    return [check_point(z) for z in points]
