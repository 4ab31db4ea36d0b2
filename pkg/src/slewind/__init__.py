"""Winding and passage probabilities of the chordal SLE_{8/3} trace.

Coulomb-gas correlators of twist operators, closed-form references, Green's
functions and a Loewner-evolution Monte Carlo oracle.
"""

__version__ = "0.1.0"

from .closed_forms import (CorrelatorValue, green1_closed, h0, h1_closed, pde_residual_h1,
                           schramm_probability, simmons_cardy_two_point)
from .core_cft import BoundaryFrame, KacLabel
from .coulomb_gas import h1_cg, hn_cg
from .winding import (WeightVector, WindingPattern, correlators_to_weights, left_passage,
                      passage_between, pattern_probability)

__all__ = [
    "BoundaryFrame", "CorrelatorValue", "KacLabel", "WeightVector", "WindingPattern",
    "correlators_to_weights", "green1_closed", "h0", "h1_cg", "h1_closed", "hn_cg", "left_passage",
    "passage_between", "pattern_probability", "pde_residual_h1", "schramm_probability",
    "simmons_cardy_two_point",
]
