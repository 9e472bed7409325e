"""Garding-Dirichlet polynomial operators on symmetric matrices.

Build operators, compute their Garding eigenvalues and cones, and check the
determinant majorization inequality numerically.
"""

__version__ = "0.1.0"
