import math

import pytest

from cuspbound.cusp_map import CuspMap
from cuspbound.domain import CuspProfile
from cuspbound.errors import DomainError
from cuspbound.fem import (CondenserSpec, Disc, Rect, Ring, annulus_capacity, capacity_p, capacity_transfer_check,
                           mesh_annulus, mesh_rectangle)

BOTTOM = (Rect(-1, -1, 2, 0),)


def strips(gap):
    return CondenserSpec(BOTTOM, (Rect(-1, gap, 2, 2),))


def annulus_condenser(inner, outer):
    return CondenserSpec((Ring((0, 0), 0.0, inner),), (Ring((0, 0), outer),))


@pytest.fixture(scope='module')
def square():
    return mesh_rectangle(1.0, 1.0, 0.05)


class TestRadialOracle:
    def test_harmonic(self):
        assert annulus_capacity(1, 2, 2) == pytest.approx(2 * math.pi / math.log(2))
        assert annulus_capacity(1, 2, 2) == pytest.approx(9.0647, abs=1e-4)

    def test_p3(self):
        assert annulus_capacity(1, 2, 3) == pytest.approx(9.1552, abs=1e-4)

    def test_continuous_in_p(self):
        assert annulus_capacity(1, 2, 2 + 1e-7) == pytest.approx(annulus_capacity(1, 2, 2), rel=1e-5)

    def test_rejected(self):
        with pytest.raises(DomainError):
            annulus_capacity(2, 1, 2)


class TestCapacity:
    @pytest.mark.parametrize('p', [2.0, 3.0, 1.5])
    def test_linear_profile_is_exact(self, square, p):
        # u = y is the minimiser between the bottom and the top sides
        result = capacity_p(square, strips(1.0), p)
        assert result.value == pytest.approx(1.0, rel=1e-8)

    def test_shrinking_gap_increases_capacity(self, square):
        values = [capacity_p(square, strips(gap), 2).value for gap in (1.0, 0.75, 0.5)]
        assert values == sorted(values)
        assert values[-1] == pytest.approx(2.0, rel=1e-8)

    @pytest.mark.parametrize('p, expected', [(2.0, 9.0647), (3.0, 9.1552)])
    def test_annulus(self, p, expected):
        mesh = mesh_annulus(1.0, 2.0, 0.05)
        assert capacity_p(mesh, annulus_condenser(1.0, 2.0), p).value == pytest.approx(expected, rel=2e-2)

    def test_newton_reaches_tolerance(self):
        result = capacity_p(mesh_annulus(1.0, 2.0, 0.05), annulus_condenser(1.0, 2.0), 3.0)
        assert result.iterations >= 1
        assert result.gradient_norm < 1e-8

    @pytest.mark.slow
    def test_fine_annulus(self):
        mesh = mesh_annulus(1.0, 2.0, 0.02)
        assert capacity_p(mesh, annulus_condenser(1.0, 2.0), 2).value == pytest.approx(9.0647, rel=2e-2)

    def test_field_takes_plate_values(self, square):
        cond = CondenserSpec((Disc((0.5, 0.5), 0.1),), (Rect(-1, 0.9, 2, 2),))
        result = capacity_p(square, cond, 2.5)
        mask0, mask1 = cond.masks(square.vertices)
        assert (result.field.values[mask0] == 0).all()
        assert (result.field.values[mask1] == 1).all()
        assert 0 < result.value < math.inf


class TestCondenser:
    def test_plate_covers_nothing(self, square):
        with pytest.raises(DomainError):
            CondenserSpec((Disc((5, 5), 0.1),), (Rect(-1, 0.9, 2, 2),)).pinned(square)

    def test_overlapping_plates(self, square):
        with pytest.raises(DomainError):
            CondenserSpec((Rect(-1, -1, 2, 0.5),), (Rect(-1, 0.4, 2, 2),)).pinned(square)

    def test_bad_p(self, square):
        with pytest.raises(DomainError):
            capacity_p(square, strips(1.0), 1.0)


class TestTransfer:
    def test_identity_map(self):
        cond = CondenserSpec((Rect(0, 0.905, 1, 1.01),), (Rect(0, 0.503, 1, 0.611),))
        report = capacity_transfer_check(CuspProfile(2, (1.0,)), 1.0, 2.0, cond, h=0.05)
        assert report.distortion == pytest.approx(1.0)
        assert report.ratio == pytest.approx(1.0, rel=1e-12)
        assert report.passed
        assert report.to_dict()['status'] == 'PASS'

    def test_finite_distortion_cusp(self):
        cond = CondenserSpec((Rect(-1, 0.9, 2, 1),), (Rect(-1, 0.5, 2, 0.6),))
        report = capacity_transfer_check(CuspProfile(2, (1.5,)), 0.25, 1.8, cond, h=0.05)
        assert 1.0 < report.distortion <= CuspMap(0.25, CuspProfile(2, (1.5,))).distortion_sup_bound(1.8)
        assert 0 < report.ratio <= report.distortion * (1 + report.mesh_tol)
        assert report.to_dict()['status'] == 'PASS'

    @pytest.mark.slow
    def test_finite_distortion_under_mesh_halving(self):
        cond = CondenserSpec((Rect(-1, 0.9, 2, 1),), (Rect(-1, 0.5, 2, 0.6),))
        coarse, fine = (capacity_transfer_check(CuspProfile(2, (1.5,)), 0.25, 1.8, cond, h=h)
                        for h in (0.0125, 0.00625))
        assert fine.cap_reference == pytest.approx(coarse.cap_reference, rel=0.02)
        assert fine.cap_cusp == pytest.approx(coarse.cap_cusp, rel=0.02)
        assert fine.ratio == pytest.approx(coarse.ratio, rel=0.02)
        assert fine.passed and coarse.passed

    def test_infinite_distortion(self):
        cond = CondenserSpec((Rect(-1, 0.9, 2, 1),), (Rect(-1, 0.5, 2, 0.6),))
        with pytest.raises(DomainError):
            capacity_transfer_check(CuspProfile(2, (1.5,)), 0.4, 1.8, cond)

    def test_planar_only(self):
        cond = CondenserSpec((Rect(-1, 0.9, 2, 1),), (Rect(-1, 0.5, 2, 0.6),))
        with pytest.raises(DomainError):
            capacity_transfer_check(CuspProfile(3, (1.5, 1.5)), 0.5, 1.8, cond)
