"""
Quadrature building blocks
==========================

Gauss-Jacobi rules, branch tracking along polylines, graded panels near
almost-coincident singularities and Richardson extrapolation.
"""

import cmath

import numpy as np

from slewind.numerics import PowerFactor, graded_rule, jacobi_rule, path_integral, richardson_limit

###############################################################################
# A Gauss-Jacobi rule integrates (1-t)^a (1+t)^b p(t) exactly for polynomials
# of degree < 2n.
r = jacobi_rule(6, -2 / 3, -2 / 3)
print("sum of weights:", r.weights.sum())

###############################################################################
# (u - eta)^{-2/3} along two different paths from 0, with the branch fixed at
# the start. Both cross the principal cut; the continued branch makes them
# agree.
eta = 1 + 1j
anchor = [cmath.phase(-eta)]
f = [PowerFactor(eta, -2 / 3)]
print(path_integral(f, None, [0, 0.5 + 2j], 32, anchors=anchor))
print(path_integral(f, None, [0, -0.5 + 1.2j, 0.5 + 2j], 32, anchors=anchor))

###############################################################################
# A Lorentzian of width 1e-4 needs graded panels.
d = 1e-4
s, w = graded_rule(-1, 1, 32, near_points=[(0.3, d)])
exact = (np.arctan(0.7 / d) + np.arctan(1.3 / d)) / d
print(f"{len(s)} nodes, relative error {abs(np.dot(w, 1 / ((s - 0.3) ** 2 + d * d)) / exact - 1):.1e}")

###############################################################################
# Extrapolating eps^{-2/3} P(eps) with known correction powers.
eps = [0.1, 0.05, 0.025, 0.0125]
samples = [(e, e ** (2 / 3) * (1.5 + 0.3 * e - 0.7 * e ** (4 / 3))) for e in eps]
print(richardson_limit(samples, 2 / 3, powers=(1, 4 / 3, 2)))
