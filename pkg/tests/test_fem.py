import math

import numpy as np
import pytest
from scipy import optimize

from cuspbound import bounds
from cuspbound.bounds import SearchOpts
from cuspbound.domain import CuspProfile
from cuspbound.errors import DomainError, NonConvergenceError
from cuspbound.fem import (ScalarField, bracket_check, mesh_cusp_2d, mesh_disc, mesh_rectangle, mu2_fem,
                           mup_rayleigh, neumann_eigenpair, p_mean)
from cuspbound.fem.assembly import mass_matrix, stiffness_matrix
from utils.utils import OrderedMap


@pytest.fixture(scope='module')
def square():
    return mesh_rectangle(1.0, 1.0, 0.1)


class TestAssembly:
    def test_constants_in_kernel(self, square):
        np.testing.assert_allclose(stiffness_matrix(square) @ np.ones(square.n_vertices), 0.0, atol=1e-12)
        assert mass_matrix(square).sum() == pytest.approx(1.0)

    def test_linear_field(self, square):
        field = ScalarField.on(square, square.vertices[:, 0])
        np.testing.assert_allclose(field.gradients(square), np.tile([1.0, 0.0], (square.n_triangles, 1)),
                                   atol=1e-12)
        assert field.gradient_lp_norm(square, 3) == pytest.approx(1.0)
        assert field.mean(square) == pytest.approx(0.5)
        # ∫ x² over the unit square, exact for quadratics
        assert field.lp_norm(square, 2) ** 2 == pytest.approx(1 / 3)

    def test_constant_field(self, square):
        field = ScalarField.on(square, np.ones(square.n_vertices))
        assert field.lp_norm(square, 4) == pytest.approx(1.0)
        assert field.gradient_lp_norm(square, 2) == pytest.approx(0.0, abs=1e-12)

    def test_field_size(self, square):
        with pytest.raises(DomainError):
            ScalarField.on(square, np.zeros(3))


class TestPMean:
    def test_constant(self, square):
        assert p_mean(np.full(square.n_vertices, 5.0), square, 3) == 5.0

    def test_least_squares(self, square):
        values = np.sin(3 * square.vertices[:, 0]) + square.vertices[:, 1] ** 2
        assert p_mean(values, square, 2) == pytest.approx(ScalarField(values).mean(square), rel=1e-12)

    def test_symmetric_two_valued(self, square):
        values = np.sign(square.vertices[:, 0] - 0.5)
        assert p_mean(ScalarField(values), square, 4) == pytest.approx(0.0, abs=1e-10)

    def test_rejected(self, square):
        with pytest.raises(DomainError):
            p_mean(np.zeros(square.n_vertices), square, 1.0)


class TestNeumannEigen:
    def test_square(self):
        assert mu2_fem(mesh_rectangle(1.0, 1.0, 0.05)) == pytest.approx(math.pi ** 2, rel=1e-2)

    def test_rectangle(self):
        assert mu2_fem(mesh_rectangle(2.0, 1.0, 0.05)) == pytest.approx(math.pi ** 2 / 4, rel=1e-2)

    def test_disc(self):
        assert mu2_fem(mesh_disc(1.0, 0.05)) == pytest.approx(bounds.ball_neumann_root(2) ** 2, rel=1e-2)

    def test_refinement_decreases_to_the_limit(self):
        values = [mu2_fem(mesh_rectangle(1.0, 1.0, h)) for h in (0.2, 0.1, 0.05)]
        assert values == sorted(values, reverse=True)
        assert values[-1] >= math.pi ** 2 * (1 - 1e-9)

    def test_tip_truncation(self):
        coarse = mesh_cusp_2d(3.0, 0.05, 6)
        deep = mesh_cusp_2d(3.0, 0.05, 9)
        assert deep.grading['y_min'] == pytest.approx(coarse.grading['y_min'] / 2)
        assert mu2_fem(deep) == pytest.approx(mu2_fem(coarse), rel=5e-3)

    def test_eigenfield(self, square):
        mu, field = neumann_eigenpair(square)
        mass = mass_matrix(square)
        v = field.values
        assert v @ (mass @ v) == pytest.approx(1.0)
        assert mass @ v @ np.ones(square.n_vertices) == pytest.approx(0.0, abs=1e-10)
        assert (v @ (stiffness_matrix(square) @ v)) == pytest.approx(mu)

    @pytest.mark.slow
    def test_fine_square(self):
        assert mu2_fem(mesh_rectangle(1.0, 1.0, 0.02)) == pytest.approx(math.pi ** 2, rel=1e-2)

    @pytest.mark.slow
    def test_shift_invert_route(self):
        # more vertices than the dense solver takes
        mesh = mesh_rectangle(1.0, 1.0, 0.015)
        assert mesh.n_vertices > 3000
        assert mu2_fem(mesh) == pytest.approx(math.pi ** 2, rel=1e-2)


class TestRayleigh:
    def test_p2_matches_eigenvalue(self, square):
        result = mup_rayleigh(square, 2, restarts=2, iters=200)
        assert result.value == pytest.approx(mu2_fem(square), rel=5e-3)
        assert result.discretization
        assert result.restarts == 3
        assert 1 <= result.successful <= 3

    def test_p2_on_cusp(self):
        mesh = mesh_cusp_2d(3.0, 0.1, 3)
        assert mup_rayleigh(mesh, 2, restarts=1, iters=200).value == pytest.approx(mu2_fem(mesh), rel=1e-2)

    def test_seeded_and_parallel(self, square):
        serial = mup_rayleigh(square, 3, restarts=3, iters=100, seed=7)
        again = mup_rayleigh(square, 3, restarts=3, iters=100, seed=7, mapper=OrderedMap(3))
        assert serial.value == again.value

    def test_above_convex_lower_bound(self, square):
        value = mup_rayleigh(square, 3, restarts=2, iters=300).value
        assert value >= bounds.ent_lower(math.sqrt(2), 3)

    def test_stalled_line_search(self, square, monkeypatch):
        def stalled(fun, x0, jac, method, options):
            value, gradient = fun(x0)
            return optimize.OptimizeResult(fun=value, x=x0, jac=gradient, status=2, success=False, nit=1,
                                           message='ABNORMAL_TERMINATION_IN_LNSRCH')

        monkeypatch.setattr(optimize, 'minimize', stalled)
        with pytest.raises(NonConvergenceError) as info:
            mup_rayleigh(square, 3, restarts=2, iters=50)
        assert info.value.residual > 0

    def test_stalled_at_a_stationary_point(self, square, monkeypatch):
        def stationary(fun, x0, jac, method, options):
            value, gradient = fun(x0)
            return optimize.OptimizeResult(fun=value, x=x0, jac=np.zeros_like(gradient), status=2, success=False,
                                           nit=1, message='ABNORMAL_TERMINATION_IN_LNSRCH')

        monkeypatch.setattr(optimize, 'minimize', stationary)
        assert mup_rayleigh(square, 3, restarts=2, iters=50).successful == 3

    @pytest.mark.parametrize('p, restarts, iters', [(1.0, 2, 10), (2.0, -1, 10), (2.0, 2, 0)])
    def test_rejected(self, square, p, restarts, iters):
        with pytest.raises(DomainError):
            mup_rayleigh(square, p, restarts=restarts, iters=iters)


class TestBracket:
    def test_convex_square(self, square):
        report = bracket_check(square, 2, restarts=1, iters=200)
        assert report.lower_kind == 'convex'
        assert report.lower == pytest.approx(math.pi ** 2 / 2)
        assert report.upper_ok
        assert report.status == 'PASS'
        assert 0.9 < report.sw_ratio < 1.0

    def test_cusp_p_not_below_gamma(self):
        mesh = mesh_cusp_2d(1.0, 0.1, 3)
        report = bracket_check(mesh, 2.5, CuspProfile(2, (1.0,)), restarts=1, iters=100)
        assert report.lower is None
        assert report.upper_ok
        assert report.status == 'PASS'

    def test_cusp(self):
        mesh = mesh_cusp_2d(2.0, 0.1, 4)
        report = bracket_check(mesh, 1.5, CuspProfile(2, (2.0,)), restarts=1, iters=200,
                               search=SearchOpts(q_points=8, r_points=8))
        assert report.lower_kind == 'cusp'
        assert 0 < report.lower <= report.mup
        assert report.bound['extrapolated']
        assert report.upper_ok
        assert report.to_dict()['status'] == 'PASS'

    @pytest.mark.slow
    @pytest.mark.parametrize('gamma1', [1.5, 2.0, 3.0])
    @pytest.mark.parametrize('p', [1.5, 2.0, 3.0])
    def test_cusp_bracket(self, gamma1, p):
        profile = CuspProfile(2, (gamma1,))
        if not p < profile.gamma_total:
            pytest.skip('no cusp bound for p >= γ')
        report = bracket_check(mesh_cusp_2d(gamma1, 0.05, 6), p, profile, restarts=4, iters=500,
                               search=SearchOpts(q_points=16, r_points=16))
        assert report.lower_ok and report.upper_ok, report.to_dict()
        assert report.status == 'PASS'
