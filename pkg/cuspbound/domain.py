"""
Data model shared by the whole library: Hölder cusp profiles, Sobolev exponent triples and the
admissible interval of the mapping parameter a.

    H_g = {0 < x_n < 1, 0 < x_i < x_n^{γ_i}}    and    H_1 = {0 < x_n < 1, 0 < x_i < x_n}
"""
import math
from dataclasses import dataclass, field

import numpy as np

from cuspbound.errors import DomainError


@dataclass(frozen=True)
class CuspProfile:
    """Dimension and anisotropic Hölder exponents of a cusp domain H_g."""
    n: int
    gammas: tuple
    gamma_total: float = field(init=False)

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f'Dimension must be an integer >= 2, got {self.n}.')
        if len(gammas) != self.n - 1:
            raise DomainError(f'Dimension {self.n} needs {self.n - 1} exponents, got {len(gammas)}.')
        below = [g for g in gammas if not g >= 1]
        if below:
            raise DomainError(f'Hölder exponents must be >= 1, got {below}.')

        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'gammas', gammas)
        object.__setattr__(self, 'gamma_total', 1.0 + math.fsum(gammas))

    @property
    def is_h1(self):
        return all(g == 1 for g in self.gammas)

    @property
    def gamma_sum(self):
        return math.fsum(self.gammas)

    @property
    def gamma_square_sum(self):
        return math.fsum(g * g for g in self.gammas)

    @property
    def volume(self):
        """Volume of H_g, the integral of G(t) over (0, 1)."""
        return 1.0 / self.gamma_total

    @property
    def sigma(self):
        """Exponent σ of a σ-Hölder singularity, only defined when all γ_i are equal."""
        if len(set(self.gammas)) != 1:
            raise DomainError('σ is only defined for profiles with equal exponents.')
        return (self.gamma_total - 1) / (self.n - 1)

    def g(self, i, tau):
        return np.power(tau, self.gammas[i])

    def G(self, tau):
        return np.power(tau, self.gamma_total - 1)

    def contains(self, y):
        """Membership of points (last axis of size n) in the open domain H_g."""
        y = np.asarray(y, dtype=float)
        yn = y[..., -1]
        inside = (yn > 0) & (yn < 1)
        for i, g in enumerate(self.gammas):
            inside &= (y[..., i] > 0) & (y[..., i] < np.power(np.clip(yn, 0, None), g))
        return inside

    def to_mapping(self):
        return {'n': self.n, 'gammas': list(self.gammas)}

    @classmethod
    def from_mapping(cls, data):
        return cls(int(data['n']), tuple(data['gammas']))


def cusp_profile_new(n, gammas):
    return CuspProfile(n, tuple(gammas))


@dataclass(frozen=True)
class ExponentConfig:
    """Sobolev exponents: p on the cusp side, q on the reference side, r the Poincaré target."""
    p: float
    q: float
    r: float
    delta: float = field(init=False)

    def __post_init__(self):
        if not self.p > 1:
            raise DomainError(f'p must be > 1, got {self.p}.')
        if not 1 < self.q < self.p:
            raise DomainError(f'q must lie in (1, p) = (1, {self.p}), got {self.q}.')
        if not self.r >= self.q:
            raise DomainError(f'r must be >= q = {self.q}, got {self.r}.')
        object.__setattr__(self, 'delta', 1.0 / self.q - 1.0 / self.r)

    def r_upper(self, n):
        """Sobolev exponent nq/(n - q), infinite when q >= n."""
        return n * self.q / (n - self.q) if self.q < n else math.inf

    def is_admissible(self, profile):
        """All the exponent constraints the cusp estimate needs for this profile."""
        return (self.p < profile.gamma_total
                and self.r < self.r_upper(profile.n)
                and self.delta_ok(profile.n))

    def delta_ok(self, n):
        return 0 <= self.delta < 1.0 / n

    def to_mapping(self):
        return {'p': self.p, 'q': self.q, 'r': self.r}

    @classmethod
    def from_mapping(cls, data):
        return cls(float(data['p']), float(data['q']), float(data['r']))


@dataclass(frozen=True)
class AInterval:
    """Open interval of admissible mapping parameters a, stored by its endpoints."""
    lo: float
    hi: float

    @property
    def nonempty(self):
        return self.lo < self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, a, closed=False):
        if closed:
            return self.lo <= a <= self.hi
        return self.lo < a < self.hi

    def clamp(self, a):
        return min(max(a, self.lo), self.hi)

    def raise_lower(self, bound):
        """The interval intersected with (bound, +inf)."""
        return AInterval(max(self.lo, bound), self.hi)


def admissible_a_interval(profile, p, q):
    n, gamma = profile.n, profile.gamma_total
    if not 1 < q < p:
        raise DomainError(f'Need 1 < q < p, got q={q}, p={p}.')
    if not p < gamma:
        raise DomainError(f'Interval undefined for p >= γ (p={p}, γ={gamma}).')

    lo = max((n - p) / (gamma - p), p * (n - q) / (gamma * q))
    hi = p * (n - q) / (q * (gamma - p))
    return AInterval(lo, hi)


def h1_volume(n):
    if n < 2:
        raise DomainError(f'Dimension must be >= 2, got {n}.')
    return 1.0 / n
