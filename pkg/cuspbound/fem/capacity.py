"""
Variational p-capacity of condensers on P1 meshes,

    cap_p(F_0, F_1; Ω) = inf { ∫|∇f|^p : f = 0 on F_0, f = 1 on F_1 },

and the check that the capacity of pulled-back plates is controlled by the distortion of φ_a.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve
from scipy.spatial import cKDTree

from cuspbound.cusp_map import CuspMap
from cuspbound.errors import DomainError, NonConvergenceError
from cuspbound.fem.assembly import ScalarField, basis_gradients, stiffness_matrix
from cuspbound.fem.mesh import mesh_cusp_2d

log = logging.getLogger(__name__)

TOLERANCE = 1e-9


@dataclass(frozen=True)
class Disc:
    center: tuple
    radius: float

    def contains(self, points):
        return np.linalg.norm(points - np.asarray(self.center), axis=1) <= self.radius * (1 + TOLERANCE)


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def contains(self, points):
        x, y = points[:, 0], points[:, 1]
        return (x >= self.xmin) & (x <= self.xmax) & (y >= self.ymin) & (y <= self.ymax)


@dataclass(frozen=True)
class Ring:
    """Closed annulus inner <= |x - center| <= outer, outer may be infinite."""
    center: tuple
    inner: float
    outer: float = math.inf

    def contains(self, points):
        radius = np.linalg.norm(points - np.asarray(self.center), axis=1)
        return (radius >= self.inner * (1 - TOLERANCE)) & (radius <= self.outer * (1 + TOLERANCE))


@dataclass(frozen=True)
class CondenserSpec:
    """Two plates, each a union of discs, rectangles and rings."""
    plate0: tuple
    plate1: tuple

    @staticmethod
    def _mask(plate, points):
        mask = np.zeros(len(points), dtype=bool)
        for shape in plate:
            mask |= shape.contains(points)
        return mask

    def masks(self, points):
        points = np.asarray(points, dtype=float)
        return self._mask(self.plate0, points), self._mask(self.plate1, points)

    def pinned(self, mesh, points=None):
        """Vertex masks of both plates, validated against the mesh.

        `points` are the locations tested against the plates, the mesh vertices by default.
        """
        mask0, mask1 = self.masks(mesh.vertices if points is None else points)
        for name, mask in (('plate0', mask0), ('plate1', mask1)):
            if not mask.any():
                raise DomainError(f'{name} covers no vertex of {mesh}.')
        if np.any(mask0 & mask1):
            raise DomainError(f'The plates share {np.sum(mask0 & mask1)} vertices.')

        separation, _ = cKDTree(mesh.vertices[mask0]).query(mesh.vertices[mask1])
        if not separation.min() > 0:
            raise DomainError('The plates are not separated.')

        _, labels = mesh.components()
        for component in np.unique(labels):
            members = labels == component
            if not ((mask0 & members).any() and (mask1 & members).any()):
                raise DomainError(f'Mesh component {component} does not touch both plates.')
        return mask0, mask1


@dataclass
class CapacityResult:
    value: float
    field: ScalarField
    p: float
    gradient_norm: float
    iterations: int

    def __float__(self):
        return self.value


def _energy(areas, gradients, triangles, u, p):
    grad = np.einsum('ti,tik->tk', u[triangles], gradients)
    return float(np.sum(areas * np.linalg.norm(grad, axis=1) ** p)), grad


def _newton_system(mesh, areas, gradients, grad, p):
    """Gradient and a positive definite Hessian of ∫|∇u|^p, the Hessian regularised near ∇u = 0."""
    norm2 = np.einsum('tk,tk->t', grad, grad)
    eps2 = 1e-12 * max(norm2.max(), 1e-300)
    reg = norm2 + eps2

    safe = np.where(norm2 > 0, norm2, 1.0)
    flux = p * (areas * np.where(norm2 > 0, safe ** ((p - 2) / 2), 0.0))[:, None] * grad
    gradient = np.zeros(mesh.n_vertices)
    np.add.at(gradient, mesh.triangles.ravel(), np.einsum('tk,tik->ti', flux, gradients).ravel())

    tensor = (reg ** ((p - 2) / 2))[:, None, None] * np.eye(2) \
        + ((p - 2) * reg ** ((p - 4) / 2))[:, None, None] * np.einsum('tk,tl->tkl', grad, grad)
    local = p * areas[:, None, None] * np.einsum('tik,tkl,tjl->tij', gradients, tensor, gradients)

    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    hessian = sparse.coo_matrix((local.ravel(), (rows, cols)), shape=(mesh.n_vertices,) * 2).tocsr()
    return gradient, hessian


def capacity_p(mesh, cond, p, tol=1e-8, max_iter=200, pins=None):
    """Minimise ∫|∇f|^p with f pinned to 0 and 1 on the plates.

    p = 2 is one linear solve. Otherwise damped Newton with Armijo backtracking starts from the
    p = 2 solution and stops once the norm of the free gradient is below tol.
    """
    if not p > 1:
        raise DomainError(f'p must be > 1, got {p}.')
    mask0, mask1 = pins if pins is not None else cond.pinned(mesh)
    free = ~(mask0 | mask1)

    u = np.zeros(mesh.n_vertices)
    u[mask1] = 1.0
    stiffness = stiffness_matrix(mesh)
    if free.any():
        u[free] = spsolve(stiffness[free][:, free].tocsc(), -stiffness[free][:, ~free] @ u[~free])

    areas, gradients = basis_gradients(mesh)
    energy, grad = _energy(areas, gradients, mesh.triangles, u, p)
    iterations, gradient_norm = 0, 0.0

    if p != 2 and free.any():
        for iterations in range(1, max_iter + 1):
            gradient, hessian = _newton_system(mesh, areas, gradients, grad, p)
            gradient_norm = float(np.linalg.norm(gradient[free]))
            if gradient_norm < tol:
                break

            direction = np.zeros_like(u)
            direction[free] = spsolve(hessian[free][:, free].tocsc(), -gradient[free])
            slope = gradient[free] @ direction[free]

            step = 1.0
            while True:
                trial_energy, trial_grad = _energy(areas, gradients, mesh.triangles, u + step * direction, p)
                if trial_energy <= energy + 1e-4 * step * slope + 1e-14 * abs(energy):
                    break
                step /= 2
                if step < 1e-12:
                    raise NonConvergenceError(f'Capacity line search stalled for p={p} on {mesh}', gradient_norm)
            u, energy, grad = u + step * direction, trial_energy, trial_grad
        else:
            raise NonConvergenceError(f'Capacity Newton did not converge for p={p} on {mesh}', gradient_norm)

    log.debug(f'cap_{p} = {energy!r} on {mesh} after {iterations} Newton steps')
    return CapacityResult(value=energy, field=ScalarField.on(mesh, u), p=p,
                          gradient_norm=gradient_norm, iterations=iterations)


def annulus_capacity(inner, outer, p):
    """Capacity of the condenser (|x| <= inner, |x| >= outer) in the plane, from the radial solution."""
    if not 0 < inner < outer:
        raise DomainError(f'Need 0 < inner < outer, got {inner}, {outer}.')
    if p == 2:
        return 2 * math.pi / math.log(outer / inner)
    k = (p - 2) / (p - 1)
    integral = (p - 1) / (p - 2) * (outer ** k - inner ** k)
    return 2 * math.pi * integral ** (1 - p)


@dataclass
class TransferReport:
    gammas: tuple
    a: float
    p: float
    h: float
    cap_reference: float
    cap_cusp: float
    ratio: float
    distortion: float
    mesh_tol: float

    @property
    def passed(self):
        return self.ratio <= self.distortion * (1 + self.mesh_tol)

    def to_dict(self):
        data = dict(self.__dict__)
        data['gammas'] = list(self.gammas)
        data['status'] = 'PASS' if self.passed else 'FAIL'
        return data


def capacity_transfer_check(profile, a, p, cond, h=0.05, mesh_tol=0.02, grading_levels=6):
    """cap_p^(1/p) of the plates pulled back to H_1 against K times cap_p^(1/p) on H_g.

    The plates are given in H_g; a vertex x of the H_1 mesh is pinned when φ_a(x) lies in a plate.
    """
    if profile.n != 2:
        raise DomainError(f'The capacity check runs on planar cusps, got n={profile.n}.')
    cusp_map = CuspMap(a, profile)
    distortion = cusp_map.distortion_sup(p)

    reference = mesh_cusp_2d(1.0, h, grading_levels)
    cusp = mesh_cusp_2d(profile.gammas[0], h, grading_levels)

    pins = cond.pinned(reference, cusp_map.map_closure(reference.vertices))
    cap_reference = capacity_p(reference, cond, p, pins=pins).value
    cap_cusp = capacity_p(cusp, cond, p).value

    report = TransferReport(gammas=profile.gammas, a=a, p=p, h=h, cap_reference=cap_reference,
                            cap_cusp=cap_cusp, ratio=(cap_reference / cap_cusp) ** (1 / p),
                            distortion=distortion, mesh_tol=mesh_tol)
    log.info(f'Capacity transfer γ={profile.gammas}, a={a}, p={p}: ratio {report.ratio:.6g} vs K {distortion:.6g}')
    return report
