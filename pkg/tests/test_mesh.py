import math

import numpy as np
import pytest

from cuspbound.errors import DomainError
from cuspbound.fem import (TriMesh, load_field, load_mesh, mesh_annulus, mesh_cusp_2d, mesh_disc, mesh_h1,
                           mesh_rectangle, save_field, save_mesh)


def assert_valid(mesh):
    audit = mesh.audit()
    assert audit['oriented']
    assert audit['conforming']
    return audit


class TestRectangle:
    def test_unit_square(self):
        mesh = mesh_rectangle(1.0, 1.0, 0.1)
        audit = assert_valid(mesh)
        assert audit['angle_ok']
        assert mesh.area() == pytest.approx(1.0)
        assert mesh.diameter() == pytest.approx(math.sqrt(2))
        assert mesh.n_vertices == 121
        assert mesh.n_triangles == 200
        assert set(mesh.boundary_tags) == {'bottom', 'top', 'left', 'right'}

    def test_non_multiple_of_h(self):
        mesh = mesh_rectangle(2.0, 1.0, 0.3)
        assert_valid(mesh)
        assert mesh.area() == pytest.approx(2.0)

    @pytest.mark.parametrize('h', [0.0, 0.5, -0.1])
    def test_bad_size(self, h):
        with pytest.raises(DomainError):
            mesh_rectangle(1.0, 1.0, h)


class TestCusp:
    def test_reference_triangle(self):
        mesh = mesh_h1(0.05, 4)
        assert_valid(mesh)
        assert mesh.area() == pytest.approx(0.5, rel=1e-12)
        assert mesh.grading['y_min'] == 0.0
        assert mesh.components()[0] == 1
        assert 'tip' not in mesh.boundary_tags

    def test_cubic_cusp_area(self):
        mesh = mesh_cusp_2d(3.0, 0.05, 6)
        assert_valid(mesh)
        assert mesh.area() == pytest.approx(0.25, rel=5e-3)

    def test_truncated_tip(self):
        mesh = mesh_cusp_2d(2.0, 0.05, 4)
        assert_valid(mesh)
        y_min = mesh.grading['y_min']
        assert y_min == pytest.approx(max(0.05 ** 2, (0.05 / 16) ** 0.5))
        assert mesh.vertices[:, 1].min() == pytest.approx(y_min)
        assert {'top', 'tip', 'axis', 'wall'} == set(mesh.boundary_tags)

    @pytest.mark.parametrize('gamma1', [1.0, 1.5, 2.0, 3.0])
    @pytest.mark.parametrize('h', [0.05, 0.02])
    def test_angles_away_from_the_tip(self, gamma1, h):
        audit = assert_valid(mesh_cusp_2d(gamma1, h, 6))
        assert audit['angle_ok'], audit['min_angle']

    def test_steep_wall_keeps_columns(self):
        # x = y³ has slope 3 at the top, the first rows lose one column each
        mesh = mesh_cusp_2d(3.0, 0.05, 6)
        top = mesh.vertices[np.isclose(mesh.vertices[:, 1], 0.95 ** (1 / 3))]
        assert len(top) == 20
        assert np.allclose(np.sort(top[:, 0]), np.arange(20) * 0.05)

    def test_vertices_inside_closure(self):
        gamma1 = 1.5
        mesh = mesh_cusp_2d(gamma1, 0.05, 6)
        x, y = mesh.vertices.T
        assert np.all((y >= 0) & (y <= 1))
        assert np.all((x >= 0) & (x <= y ** gamma1 + 1e-12))

    def test_grading_refines_the_tip(self):
        coarse = mesh_cusp_2d(1.0, 0.1, 1)
        fine = mesh_cusp_2d(1.0, 0.1, 5)
        assert fine.n_vertices > coarse.n_vertices
        assert fine.grading['rows'] > coarse.grading['rows']

    @pytest.mark.parametrize('gamma1, levels', [(0.5, 4), (2.0, 0), (2.0, 1.5)])
    def test_rejected(self, gamma1, levels):
        with pytest.raises(DomainError):
            mesh_cusp_2d(gamma1, 0.05, levels)


class TestRound:
    def test_disc(self):
        mesh = mesh_disc(1.0, 0.05)
        audit = assert_valid(mesh)
        assert audit['euler_ok']
        assert mesh.area() == pytest.approx(math.pi, rel=1e-3)
        assert mesh.diameter() == pytest.approx(2.0, rel=1e-3)
        assert set(mesh.boundary_tags) == {'circle'}

    def test_annulus(self):
        mesh = mesh_annulus(1.0, 2.0, 0.1)
        audit = assert_valid(mesh)
        assert audit['euler_ok']
        assert mesh.holes == 1
        assert mesh.area() == pytest.approx(3 * math.pi, rel=1e-2)
        assert set(mesh.boundary_tags) == {'inner', 'outer'}

    def test_bad_annulus(self):
        with pytest.raises(DomainError):
            mesh_annulus(2.0, 1.0, 0.1)


def test_audit_flags_inverted_triangle():
    mesh = TriMesh([(0, 0), (1, 0), (0, 1)], [(0, 2, 1)])
    assert not mesh.audit()['oriented']


def test_audit_flags_unused_vertex():
    mesh = TriMesh([(0, 0), (1, 0), (0, 1), (5, 5)], [(0, 1, 2)])
    audit = mesh.audit()
    assert not audit['all_vertices_used']
    assert not audit['conforming']


def test_text_export(tmp_path):
    mesh = mesh_cusp_2d(2.0, 0.1, 3)
    path = tmp_path / 'cusp.mesh'
    save_mesh(mesh, str(path))

    header = path.read_text(encoding='utf-8').splitlines()[0]
    assert header == f'{mesh.n_vertices} {mesh.n_triangles}'
    loaded = load_mesh(str(path))
    np.testing.assert_array_equal(loaded.vertices, mesh.vertices)
    np.testing.assert_array_equal(loaded.triangles, mesh.triangles)

    values = np.sin(mesh.vertices[:, 0]) + mesh.vertices[:, 1] / 3
    save_field(values, str(tmp_path / 'field.txt'))
    np.testing.assert_array_equal(load_field(str(tmp_path / 'field.txt')), values)


def test_truncated_export(tmp_path):
    path = tmp_path / 'broken.mesh'
    path.write_text('4 2\n0.0 0.0\n1.0 0.0\n', encoding='utf-8')
    with pytest.raises(DomainError):
        load_mesh(str(path))
