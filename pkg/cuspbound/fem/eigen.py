import logging

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from cuspbound.errors import NonConvergenceError
from cuspbound.fem.assembly import ScalarField, mass_matrix, stiffness_matrix

log = logging.getLogger(__name__)

DENSE_LIMIT = 3000


def _deflate(vector, mass):
    """Remove the mass-weighted constant and normalise in the mass norm."""
    ones = np.ones_like(vector)
    m_ones = mass @ ones
    vector = vector - (m_ones @ vector) / (m_ones @ ones) * ones
    return vector / np.sqrt(vector @ (mass @ vector))


def neumann_eigenpair(mesh):
    """First nontrivial Neumann eigenpair of the P1 Laplacian, eigenfield normalised in L2."""
    stiffness, mass = stiffness_matrix(mesh), mass_matrix(mesh)

    if mesh.n_vertices <= DENSE_LIMIT:
        values, vectors = linalg.eigh(stiffness.toarray(), mass.toarray(), subset_by_index=[0, 1])
        route = 'dense'
    else:
        try:
            values, vectors = eigsh(stiffness, k=2, M=mass, sigma=-1.0, which='LM', tol=1e-12)
        except (ArpackNoConvergence, ArpackError) as e:
            raise NonConvergenceError(f'Shift-invert Lanczos failed on {mesh}: {e}')
        order = np.argsort(values)
        values, vectors = values[order], vectors[:, order]
        route = 'shift-invert'

    mu, vector = float(values[1]), _deflate(vectors[:, 1], mass)
    residual = np.linalg.norm(stiffness @ vector - mu * (mass @ vector)) / max(1.0, mu)
    if not np.isfinite(mu) or residual > 1e-6:
        raise NonConvergenceError(f'Neumann eigenproblem on {mesh} did not converge', residual)

    log.debug(f'μ_2 = {mu!r} on {mesh} ({route}, residual {residual:.2e}, null value {values[0]:.2e})')
    return mu, ScalarField.on(mesh, vector)


def mu2_fem(mesh):
    return neumann_eigenpair(mesh)[0]
