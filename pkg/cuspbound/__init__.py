"""
Lower bounds for the first nontrivial Neumann eigenvalue of the p-Laplacian on Hölder cusp
domains, together with the quadrature and finite element machinery used to check every constant.
"""

__version__ = '0.1.0'
