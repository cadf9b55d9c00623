"""
Triangle meshes of the 2D test domains: cusps H_g = {0 < y < 1, 0 < x < y^γ}, rectangles, discs and
annuli.

Every mesh is built from rows (or rings) of vertices, consecutive rows being joined by a strip
triangulation that always takes the shorter diagonal.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

from cuspbound.errors import DomainError

log = logging.getLogger(__name__)

MIN_ANGLE = 15.0


@dataclass
class TriMesh:
    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray = None
    boundary_tags: list = None
    grading: dict = field(default_factory=dict)
    holes: int = 0
    tip_rows: tuple = ()

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        self.triangles = np.asarray(self.triangles, dtype=int).reshape(-1, 3)
        if self.boundary_edges is None:
            self.boundary_edges = _boundary_edges(self.triangles)
        if self.boundary_tags is None:
            self.boundary_tags = ['boundary'] * len(self.boundary_edges)

    def __str__(self):
        return f'TriMesh with {self.n_vertices} vertices and {self.n_triangles} triangles'

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_triangles(self):
        return len(self.triangles)

    def signed_areas(self):
        p0, p1, p2 = (self.vertices[self.triangles[:, i]] for i in range(3))
        d1, d2 = p1 - p0, p2 - p0
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def area(self):
        return float(np.sum(self.signed_areas()))

    def diameter(self):
        """Largest distance between two vertices, taken over the convex hull."""
        hull = ConvexHull(self.vertices)
        return float(pdist(self.vertices[hull.vertices]).max())

    def edges(self):
        """Unique undirected edges, sorted, and how many triangles share each."""
        pairs = np.sort(self.triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2), axis=1)
        return np.unique(pairs, axis=0, return_counts=True)

    def angles(self):
        """Interior angles in degrees, shape (n_triangles, 3)."""
        corners = self.vertices[self.triangles]
        angles = np.empty((self.n_triangles, 3))
        for i in range(3):
            u = corners[:, (i + 1) % 3] - corners[:, i]
            v = corners[:, (i + 2) % 3] - corners[:, i]
            cos = np.einsum('ij,ij->i', u, v) / (np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
            angles[:, i] = np.degrees(np.arccos(np.clip(cos, -1, 1)))
        return angles

    def components(self):
        edges, _ = self.edges()
        graph = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])),
                           shape=(self.n_vertices, self.n_vertices))
        return connected_components(graph, directed=False)

    def audit(self):
        """Orientation, conformity and shape checks; returns a dict of findings."""
        edges, counts = self.edges()
        used = np.zeros(self.n_vertices, dtype=bool)
        used[self.triangles.ravel()] = True

        boundary = edges[counts == 1]
        degree = np.bincount(boundary.ravel(), minlength=self.n_vertices)
        n_components, _ = self.components()
        euler = self.n_vertices - len(edges) + self.n_triangles

        angles = self.angles()
        if self.tip_rows:
            away = ~np.isin(self.triangles, list(self.tip_rows)).any(axis=1)
            angles = angles[away]
        min_angle = float(angles.min()) if angles.size else 180.0

        report = {
            'oriented': bool(np.all(self.signed_areas() > 0)),
            'manifold_edges': bool(np.all(counts <= 2)),
            'closed_boundary': bool(np.all(degree % 2 == 0)),
            'all_vertices_used': bool(used.all()),
            'euler_ok': bool(euler == n_components - self.holes),
            'min_angle': min_angle,
            'angle_ok': min_angle >= MIN_ANGLE,
        }
        report['conforming'] = (report['manifold_edges'] and report['closed_boundary']
                                and report['all_vertices_used'] and report['euler_ok'])
        if not report['angle_ok']:
            log.debug(f'{self}: minimum angle {min_angle:.2f}° below {MIN_ANGLE}°')
        return report


def _boundary_edges(triangles):
    pairs = triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
    keys = np.sort(pairs, axis=1)
    _, index, counts = np.unique(keys, axis=0, return_index=True, return_counts=True)
    return pairs[np.sort(index[counts == 1])]


def _zip_rows(points, upper, lower):
    """Triangulate the strip between two vertex chains, taking the shorter diagonal each step."""
    triangles = []
    i = j = 0
    while i < len(upper) - 1 or j < len(lower) - 1:
        if i == len(upper) - 1:
            advance_lower = True
        elif j == len(lower) - 1:
            advance_lower = False
        else:
            advance_lower = (np.linalg.norm(points[upper[i]] - points[lower[j + 1]])
                             < np.linalg.norm(points[upper[i + 1]] - points[lower[j]]))

        if advance_lower:
            triangles.append((upper[i], lower[j], lower[j + 1]))
            j += 1
        else:
            triangles.append((upper[i], lower[j], upper[i + 1]))
            i += 1
    return triangles


def _assemble(points, rows):
    points = np.asarray(points, dtype=float)
    triangles = []
    for upper, lower in zip(rows, rows[1:]):
        triangles.extend(_zip_rows(points, upper, lower))

    triangles = np.array(triangles, dtype=int)
    p0, p1, p2 = (points[triangles[:, i]] for i in range(3))
    d1, d2 = p1 - p0, p2 - p0
    flipped = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0] < 0
    triangles[flipped] = triangles[flipped][:, [0, 2, 1]]

    area = 0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    degenerate = area <= 1e-15 * max(area.max(), 1.0)
    if degenerate.any():
        log.warning(f'Dropping {degenerate.sum()} degenerate triangles')
        triangles = triangles[~degenerate]
    return points, triangles


def _tag(mesh, classify):
    midpoints = mesh.vertices[mesh.boundary_edges].mean(axis=1)
    mesh.boundary_tags = [classify(x, y) for x, y in midpoints]
    return mesh


def _check_h(h):
    if not 0 < h < 0.5:
        raise DomainError(f'Mesh size must lie in (0, 0.5), got {h}.')


def mesh_cusp_2d(gamma1, h=0.05, grading_levels=6):
    """Mesh of H_g = {0 < y < 1, 0 < x < y^γ1}, graded toward the tip at the origin.

    With s = 1/ceil(1/h), the rows where the wall x = y^γ1 has slope >= 1 sit at widths 1 - k·s on
    the columns x = j·s, so each row drops one column and every cell is a right triangle with legs s
    and about s / slope. Further down, rows step by min(s, y^γ1 / 2) with the same x-spacing. For
    γ1 = 1 rows halve down to h·2^-L and the last row is joined to the tip. For γ1 > 1 the tip is cut
    at y_min = max(h², (h·2^-L)^(1/γ1)), where cells would otherwise fall below h·2^-L across.
    """
    if not gamma1 >= 1:
        raise DomainError(f'The cusp exponent must be >= 1, got {gamma1}.')
    _check_h(h)
    if int(grading_levels) != grading_levels or grading_levels < 1:
        raise DomainError(f'Grading levels must be a positive integer, got {grading_levels}.')

    closed = gamma1 == 1
    y_stop = h * 2.0 ** -grading_levels if closed else max(h * h, (h * 2.0 ** -grading_levels) ** (1 / gamma1))
    columns = math.ceil(1 / h - 1e-9)
    s = 1 / columns

    def slope(y):
        return gamma1 * y ** (gamma1 - 1)

    def size(y):
        return min(s, y ** gamma1 / 2) / max(1.0, slope(y))

    # (height, number of cells) per row, top down
    layout = [(1.0, columns)]
    for k in range(1, columns - 1):
        y = (1 - k * s) ** (1 / gamma1)
        if y < y_stop or slope(y) < 1:
            break
        layout.append((y, columns - k))

    y = layout[-1][0]
    while y - size(y) >= y_stop:
        y -= size(y)
        layout.append((y, None))
    if not closed:
        if y - y_stop < 0.5 * size(y) and layout[-1][1] is None:
            layout[-1] = (y_stop, None)
        else:
            layout.append((y_stop, None))

    points, rows = [], []
    for y, m in layout:
        width = y ** gamma1
        if m is None:
            m = max(1, round(width / min(s, width / 2)))
        rows.append(list(range(len(points), len(points) + m + 1)))
        points.extend((x, y) for x in np.linspace(0.0, width, m + 1))
    if closed:
        rows.append([len(points)])
        points.append((0.0, 0.0))

    points, triangles = _assemble(points, rows)
    tip = set(rows[-1]) | set(rows[-2])
    mesh = TriMesh(points, triangles, tip_rows=tuple(sorted(tip)),
                   grading={'ratio': 0.5, 'levels': int(grading_levels), 'rows': len(rows),
                            'y_min': 0.0 if closed else y_stop})

    y_min = mesh.grading['y_min']

    def classify(x, y):
        if abs(y - 1) < 1e-12:
            return 'top'
        if not closed and abs(y - y_min) < 1e-12:
            return 'tip'
        if abs(x) < 1e-12:
            return 'axis'
        return 'wall'

    log.debug(f'Cusp mesh γ1={gamma1}, h={h}: {mesh}, y_min={y_min:.3g}')
    return _tag(mesh, classify)


def mesh_h1(h=0.05, grading_levels=6):
    """The reference triangle H_1 = {0 < x < y < 1}."""
    return mesh_cusp_2d(1.0, h, grading_levels)


def mesh_rectangle(width=1.0, height=1.0, h=0.05):
    _check_h(h)
    if not (width > 0 and height > 0):
        raise DomainError(f'Rectangle sides must be > 0, got {width} x {height}.')

    nx, ny = math.ceil(width / h), math.ceil(height / h)
    xs = np.linspace(0.0, width, nx + 1)
    points, rows = [], []
    for y in np.linspace(height, 0.0, ny + 1):
        rows.append(list(range(len(points), len(points) + nx + 1)))
        points.extend((x, y) for x in xs)

    mesh = TriMesh(*_assemble(points, rows))

    def classify(x, y):
        if abs(y) < 1e-12:
            return 'bottom'
        if abs(y - height) < 1e-12:
            return 'top'
        return 'left' if abs(x) < 1e-12 else 'right'

    return _tag(mesh, classify)


def _ring(points, radius, h):
    count = max(6, math.ceil(2 * math.pi * radius / h))
    theta = np.linspace(0.0, 2 * math.pi, count, endpoint=False)
    start = len(points)
    points.extend(zip(radius * np.cos(theta), radius * np.sin(theta)))
    indices = list(range(start, start + count))
    return indices + indices[:1]


def mesh_disc(radius=1.0, h=0.05):
    """Polygonal disc centred at the origin, rings of about 2πr/h vertices."""
    _check_h(h)
    if not radius > 0:
        raise DomainError(f'Radius must be > 0, got {radius}.')

    k = math.ceil(radius / h)
    points, rows = [(0.0, 0.0)], [[0]]
    for r in np.linspace(0.0, radius, k + 1)[1:]:
        rows.append(_ring(points, r, h))

    mesh = TriMesh(*_assemble(points, rows))
    return _tag(mesh, lambda x, y: 'circle')


def mesh_annulus(inner=1.0, outer=2.0, h=0.05):
    _check_h(h)
    if not 0 < inner < outer:
        raise DomainError(f'Need 0 < inner < outer, got {inner}, {outer}.')

    k = math.ceil((outer - inner) / h)
    points, rows = [], []
    for r in np.linspace(inner, outer, k + 1):
        rows.append(_ring(points, r, h))

    mesh = TriMesh(*_assemble(points, rows), holes=1)
    middle = (inner + outer) / 2
    return _tag(mesh, lambda x, y: 'inner' if math.hypot(x, y) < middle else 'outer')


def save_mesh(mesh, path):
    with open(path, 'w', encoding='utf-8') as fp:
        fp.write(f'{mesh.n_vertices} {mesh.n_triangles}\n')
        for x, y in mesh.vertices:
            fp.write(f'{float(x)!r} {float(y)!r}\n')
        for i, j, k in mesh.triangles:
            fp.write(f'{i} {j} {k}\n')


def load_mesh(path):
    with open(path, 'r', encoding='utf-8') as fp:
        lines = [line.split() for line in fp if line.strip()]

    try:
        n_vertices, n_triangles = (int(token) for token in lines[0])
        vertices = [(float(x), float(y)) for x, y in lines[1:1 + n_vertices]]
        triangles = [tuple(int(i) for i in line) for line in lines[1 + n_vertices:1 + n_vertices + n_triangles]]
    except (ValueError, IndexError) as e:
        raise DomainError(f'Malformed mesh file {path}: {e}')
    if len(vertices) != n_vertices or len(triangles) != n_triangles:
        raise DomainError(f'Mesh file {path} is truncated.')
    return TriMesh(vertices, triangles)


def save_field(values, path):
    with open(path, 'w', encoding='utf-8') as fp:
        fp.writelines(f'{float(value)!r}\n' for value in np.asarray(values, dtype=float))


def load_field(path):
    with open(path, 'r', encoding='utf-8') as fp:
        return np.array([float(line) for line in fp if line.strip()])
