"""P1 finite element building blocks: basis gradients, stiffness and mass matrices, nodal fields."""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from cuspbound.errors import DomainError

log = logging.getLogger(__name__)


def basis_gradients(mesh):
    """Triangle areas (T,) and gradients of the three barycentric functions (T, 3, 2)."""
    corners = mesh.vertices[mesh.triangles]
    areas = mesh.signed_areas()
    if np.any(areas <= 0):
        raise DomainError(f'{mesh} has {np.sum(areas <= 0)} inverted or degenerate triangles.')

    gradients = np.empty((mesh.n_triangles, 3, 2))
    for i in range(3):
        nxt, prev = corners[:, (i + 1) % 3], corners[:, (i + 2) % 3]
        gradients[:, i, 0] = nxt[:, 1] - prev[:, 1]
        gradients[:, i, 1] = prev[:, 0] - nxt[:, 0]
    gradients /= 2 * areas[:, None, None]
    return areas, gradients


def _assemble(mesh, local):
    rows = np.repeat(mesh.triangles, 3, axis=1)
    cols = np.tile(mesh.triangles, (1, 3))
    matrix = sparse.coo_matrix((local.ravel(), (rows.ravel(), cols.ravel())),
                               shape=(mesh.n_vertices, mesh.n_vertices))
    return matrix.tocsr()


def stiffness_matrix(mesh):
    areas, gradients = basis_gradients(mesh)
    local = areas[:, None, None] * np.einsum('tik,tjk->tij', gradients, gradients)
    return _assemble(mesh, local)


def mass_matrix(mesh):
    """Consistent P1 mass matrix."""
    areas = mesh.signed_areas()
    local = areas[:, None, None] / 12 * (np.ones((3, 3)) + np.eye(3))
    return _assemble(mesh, local)


def midpoint_values(mesh, values):
    """Values at the three edge midpoints of every triangle; with weights A/3 the rule is exact for
    quadratics."""
    f = np.asarray(values)[mesh.triangles]
    return 0.5 * (f + np.roll(f, -1, axis=1))


def midpoint_owners(mesh):
    # midpoint k of a triangle sits between corners k and k+1
    return mesh.triangles, np.roll(mesh.triangles, -1, axis=1)


@dataclass
class ScalarField:
    """P1 nodal values on a mesh."""
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    @classmethod
    def on(cls, mesh, values):
        field = cls(values)
        if field.values.shape != (mesh.n_vertices,):
            raise DomainError(f'Field has {field.values.size} values for {mesh.n_vertices} vertices.')
        return field

    def __len__(self):
        return len(self.values)

    def gradients(self, mesh):
        """Constant gradient on every triangle, shape (T, 2)."""
        _, gradients = basis_gradients(mesh)
        return np.einsum('ti,tik->tk', self.values[mesh.triangles], gradients)

    def lp_norm(self, mesh, p):
        weights = mesh.signed_areas() / 3
        samples = midpoint_values(mesh, self.values)
        return float(np.sum(weights[:, None] * np.abs(samples) ** p) ** (1 / p))

    def gradient_lp_norm(self, mesh, p):
        norms = np.linalg.norm(self.gradients(mesh), axis=1)
        return float(np.sum(mesh.signed_areas() * norms ** p) ** (1 / p))

    def mean(self, mesh):
        """Area-weighted mean."""
        weights = mesh.signed_areas() / 3
        return float(np.sum(weights[:, None] * midpoint_values(mesh, self.values)) / weights.sum() / 3)
