import math

import numpy as np
import pytest

from cuspbound.domain import (AInterval, CuspProfile, ExponentConfig, admissible_a_interval, cusp_profile_new,
                              h1_volume)
from cuspbound.errors import DomainError


@pytest.mark.parametrize('n, gammas, total', [
    (3, (1, 1), 3.0),
    (3, (2, 2), 5.0),
    (2, (3,), 4.0),
])
def test_gamma_total(n, gammas, total):
    assert cusp_profile_new(n, gammas).gamma_total == total


def test_profile_normalises_exponents():
    profile = cusp_profile_new(3, [2, 1.5])
    assert profile.gammas == (2.0, 1.5)
    assert profile.gamma_sum == 3.5
    assert profile.gamma_square_sum == 6.25
    assert not profile.is_h1
    assert cusp_profile_new(3, (1, 1)).is_h1


@pytest.mark.parametrize('n, gammas', [
    (3, (1,)),
    (2, (1, 1)),
    (3, (0.5, 2)),
    (1, ()),
])
def test_profile_rejected(n, gammas):
    with pytest.raises(DomainError):
        cusp_profile_new(n, gammas)


def test_volume_and_sigma():
    profile = CuspProfile(3, (2.0, 2.0))
    assert profile.volume == pytest.approx(0.2)
    assert profile.sigma == pytest.approx(2.0)
    with pytest.raises(DomainError):
        CuspProfile(3, (1.0, 2.0)).sigma


def test_profile_functions():
    profile = CuspProfile(3, (2.0, 3.0))
    assert profile.g(0, 0.5) == pytest.approx(0.25)
    assert profile.g(1, 0.5) == pytest.approx(0.125)
    assert profile.G(0.5) == pytest.approx(0.5 ** 5)


def test_contains():
    profile = CuspProfile(2, (2.0,))
    points = np.array([[0.2, 0.5], [0.3, 0.5], [0.1, 1.0], [-0.1, 0.5]])
    assert profile.contains(points).tolist() == [True, False, False, False]


def test_profile_mapping_round_trip():
    profile = CuspProfile(3, (1.5, 2.0))
    assert CuspProfile.from_mapping(profile.to_mapping()) == profile


@pytest.mark.parametrize('n, volume', [(2, 0.5), (3, 1 / 3), (10, 0.1)])
def test_h1_volume(n, volume):
    assert h1_volume(n) == pytest.approx(volume)


def test_h1_volume_rejects_small_dimension():
    with pytest.raises(DomainError):
        h1_volume(1)


class TestExponentConfig:
    def test_delta(self):
        exps = ExponentConfig(2.0, 1.5, 4.0)
        assert exps.delta == pytest.approx(1 / 1.5 - 1 / 4)
        assert exps.r_upper(3) == pytest.approx(3.0)
        assert exps.r_upper(1.5) == math.inf

    @pytest.mark.parametrize('p, q, r', [(1.0, 1.2, 2.0), (2.0, 2.0, 3.0), (2.0, 0.9, 3.0), (2.0, 1.5, 1.4)])
    def test_rejected(self, p, q, r):
        with pytest.raises(DomainError):
            ExponentConfig(p, q, r)

    def test_admissible(self):
        profile = CuspProfile(3, (2.0, 2.0))
        assert ExponentConfig(2.0, 1.5, 2.5).is_admissible(profile)
        # r above the Sobolev exponent nq/(n - q) = 3
        assert not ExponentConfig(2.0, 1.5, 3.5).is_admissible(profile)
        # p not below γ
        assert not ExponentConfig(2.0, 1.5, 2.5).is_admissible(CuspProfile(2, (1.0,)))

    def test_mapping_round_trip(self):
        exps = ExponentConfig(2.0, 1.5, 2.5)
        assert ExponentConfig.from_mapping(exps.to_mapping()) == exps


class TestAdmissibleInterval:
    def test_h1(self, h1_3d):
        interval = admissible_a_interval(h1_3d, 2.0, 1.5)
        assert interval.lo == pytest.approx(1.0)
        assert interval.hi == pytest.approx(2.0)

    def test_cusp(self, cusp_3d):
        interval = admissible_a_interval(cusp_3d, 2.0, 1.5)
        assert interval.lo == pytest.approx(0.4)
        assert interval.hi == pytest.approx(2 / 3)

    def test_p_at_gamma(self, h1_3d):
        with pytest.raises(DomainError):
            admissible_a_interval(h1_3d, 3.0, 1.5)

    def test_grows_as_p_approaches_gamma(self, h1_3d):
        widths = [admissible_a_interval(h1_3d, p, 1.2).hi for p in (2.9, 2.99, 2.999)]
        assert widths == sorted(widths)
        assert widths[-1] > 1000

    def test_empty_interval_is_reported(self):
        # q > n: lo = max(-1, -0.15) and hi = -0.6
        interval = admissible_a_interval(CuspProfile(2, (3.0,)), 3.0, 2.5)
        assert interval.lo > interval.hi
        assert not interval.nonempty


class TestAInterval:
    def test_operations(self):
        interval = AInterval(0.4, 0.8)
        assert interval.width == pytest.approx(0.4)
        assert interval.contains(0.5)
        assert not interval.contains(0.4)
        assert interval.contains(0.4, closed=True)
        assert interval.clamp(0.1) == 0.4
        assert interval.clamp(0.9) == 0.8
        assert interval.raise_lower(0.6) == AInterval(0.6, 0.8)
        assert interval.raise_lower(0.1) == interval
