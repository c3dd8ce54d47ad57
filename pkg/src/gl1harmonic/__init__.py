"""gl1harmonic: GL(1) harmonic analysis for automorphic L-functions over Q.

Exact local Mellin theory (cyclotomic rational functions of z = p^{-s}),
Archimedean zeta integrals, pi-theta series with certified tails, the
pi-Poisson summation formula and critical zeros from the Mellin transform of
theta.
"""

__version__ = "0.1.0"
