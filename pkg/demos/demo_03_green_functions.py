"""
Green's functions from collapsing pairs
=======================================

The probability that the trace slips between z - eps/2 and z + eps/2 decays as
eps^{2/3}; the prefactor is proportional to the one-point Green's function.
Richardson extrapolation over a short ladder of eps recovers it.
"""

import numpy as np

from slewind.closed_forms import green1_closed
from slewind.green import LADDER, between_probability, calibrate_c31, green1, green2

###############################################################################
# The raw ladder at z = i. The calibration constant is fixed by G(i) = 1.
z = 1j
for f in LADDER:
    eps = f * z.imag
    print(f"eps = {eps:.4f}:  eps^(-2/3) P_between = {between_probability(z, eps) / eps ** (2 / 3):.8f}")
print("C31^2 =", calibrate_c31().c31_squared)

###############################################################################
# Elsewhere the extrapolated value reproduces (Im z)^{-2/3} sin^2(arg z), and
# the Phi_{3,1} block does so exactly.
for z in (1 + 1j, -2 + 0.5j, 0.3 + 2j):
    ext = green1(z)
    blk = green1(z, method="direct_block")
    print(f"{z}: extrapolated {ext.value:.6f} +- {ext.error_estimate:.1e}   block {blk.value:.6f}   "
          f"closed {green1_closed(z):.6f}")

###############################################################################
# Two points. Collapsing one of them onto itself, eps^{2/3} G(z - eps/2, z + eps/2)
# approaches a universal multiple of G(z).
for z in (1j, 1 + 1j, 2 + 2.5j):
    eps = 0.025 * z.imag
    g2 = green2(z - eps / 2, z + eps / 2).value
    print(f"{z}: eps^(2/3) G2 / G1 = {eps ** (2 / 3) * g2 / green1_closed(z):.4f}")
print("G2(i, 1+1.5i) =", green2(1j, 1 + 1.5j).value, " G2(1+1.5i, i) =", green2(1 + 1.5j, 1j).value)
