"""
Near passage in a Loewner simulation
====================================

The chance that the trace comes within eps of z scales as eps^{2/3} G(z).
Distances are measured with the conformal-radius proxy Im Z_t / |g_t'(z)|.
"""

import time

import numpy as np

from slewind.sle_mc import McConfig, estimate_near_passage

eps = [0.2, 0.1, 0.05, 0.025]
cfg = McConfig(n_samples=50_000, seed=3)

t0 = time.time()
at_i = np.array([e.mean for e in estimate_near_passage(1j, eps, cfg)])
at_1i = np.array([e.mean for e in estimate_near_passage(1 + 1j, eps, cfg)])
print(f"{2 * cfg.n_samples} traces in {time.time() - t0:.1f} s")

###############################################################################
# The slope should be close to 2/3 and the ratio close to G(i)/G(1+i) = 2.
print("frequencies at i:    ", np.round(at_i, 4))
print("frequencies at 1+i:  ", np.round(at_1i, 4))
print("log-log slope:", np.polyfit(np.log(eps), np.log(at_i), 1)[0])
print("ratio:", np.round(at_i / at_1i, 3))
