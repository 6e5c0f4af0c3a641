"""Determinant processes of beta random-matrix ensembles.

Exact samplers of the log-determinant processes of the beta-Laguerre,
uniform Gram and Jacobi ensembles, their exact finite-size moments,
law-of-large-numbers / CLT coefficients, large-deviation rate functions
with variational solutions, and the companion spectral densities.
"""

__version__ = "0.1.0"
