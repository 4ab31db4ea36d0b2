"""
Winding patterns around several points
======================================

The probability of each left/right pattern of the trace about N marked points
follows from the 2^N correlators H_I by a Walsh-Hadamard transform.
"""

import numpy as np

from slewind.closed_forms import simmons_cardy_two_point
from slewind.core_cft import BoundaryFrame
from slewind.winding import WindingPattern, all_probabilities, compute_weights, left_passage, passage_between

###############################################################################
# Two points: the quadrature pipeline against the Simmons-Cardy formula.
for z, w in ((1j, 2j), (1 + 1j, -1 + 0.5j), (0.2 + 0.3j, 3 + 2j)):
    print(f"{z}, {w}:  pipeline {left_passage([z, w]):.12f}   Simmons-Cardy {simmons_cardy_two_point(z, w):.12f}")

###############################################################################
# Three points: all eight patterns. Index bit i set means point i is passed
# on the left.
pts = [1 + 1j, -0.5 + 0.7j, 0.3 + 2j]
wv, err = compute_weights(pts, order=32)
p = all_probabilities(wv)
for mask, prob in enumerate(p):
    print(f"  left of {WindingPattern(mask, 3).indices()!s:10s} {prob:.6f}")
print("sum:", p.sum())

###############################################################################
# The same points seen from a different boundary frame (trace from -1 to 2).
frame = BoundaryFrame(-1.0, 2.0)
print(np.round(all_probabilities(compute_weights(pts, frame, order=32)[0]), 6))

###############################################################################
# Passing between the two points of a pair is a difference of correlators.
print("between 0.5+i +- 0.05:", passage_between([(0.45 + 1j, 0.55 + 1j)]))
