"""
Left passage of a single point
==============================

Three routes to the probability that chordal SLE_{8/3} from 0 to infinity
passes to the left of a point z: Schramm's formula, the single-screening
Coulomb-gas integral, and a direct Loewner simulation.
"""

import numpy as np

from slewind.closed_forms import h1_closed, schramm_probability
from slewind.coulomb_gas import h1_cg
from slewind.sle_mc import McConfig, estimate_patterns

###############################################################################
# At kappa = 8/3 the hypergeometric formula collapses to 1/2 + cos(arg z)/2.
for z in (1j, 1 + 1j, -2 + 0.5j):
    print(f"z = {z}:  P_left = {schramm_probability(z):.12f}   1/2 + cos(arg z)/2 = {0.5 + z.real / (2 * abs(z)):.12f}")

###############################################################################
# The Coulomb-gas correlator H1/H0 equals 2 P_left - 1. The contour integral
# is done by Gauss-Jacobi quadrature with the endpoint singularities in the
# weights, so the agreement is at rounding level.
for kappa in (8 / 3, 3.0, 10 / 3):
    z = 0.4 + 0.9j
    print(f"kappa = {kappa:.4f}:  h1_cg = {h1_cg(z, kappa=kappa).real:+.15f}   closed = {h1_closed(z, kappa=kappa).real:+.15f}")

###############################################################################
# A modest Monte Carlo run of the Loewner equation. Bit 0 of the pattern index
# marks the point as passed on the left.
z = 1 + 1j
est = estimate_patterns([z], McConfig(n_samples=20_000, seed=1))[1]
print(f"MC: {est.mean:.4f} +- {est.std_err:.4f}   exact: {schramm_probability(z):.4f}")

###############################################################################
# The left-passage probability only depends on arg z.
angles = np.linspace(0.1, np.pi - 0.1, 7)
print(np.round([schramm_probability(np.exp(1j * a)) for a in angles], 4))
