"""
The explicit homeomorphism φ_a : H_1 -> H_g,

    φ_a(x) = ((x_1/x_n) x_n^{aγ_1}, ..., (x_{n-1}/x_n) x_n^{aγ_{n-1}}, x_n^a),

with its differential, Jacobian and pointwise distortion bounds. Points are numpy arrays whose
last axis has size n, so every evaluation is vectorised over any leading shape.
"""
import enum
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from cuspbound.domain import CuspProfile
from cuspbound.errors import DomainError, InvalidVariantError

log = logging.getLogger(__name__)


class DistortionVariant(enum.Enum):
    """Which closed form of the distortion radicand to use.

    CORRECTED keeps the 2(n - 1) term that the simplified form drops.
    """
    CORRECTED = 'corrected'
    SIMPLIFIED = 'paper-simplified'


@dataclass(frozen=True)
class CuspMap:
    a: float
    profile: CuspProfile
    eps_dom: float = 1e-12

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f'The mapping parameter must be > 0, got {self.a}.')

    @property
    def n(self):
        return self.profile.n

    @property
    def exponents(self):
        """a·γ_i for every i < n."""
        return self.a * np.asarray(self.profile.gammas)

    def _points(self, x, check):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise DomainError(f'Expected points of dimension {self.n}, got {x.shape[-1]}.')

        if check:
            xn = x[..., -1:]
            inside = (xn > self.eps_dom) & (xn < 1) & (x[..., :-1] > 0) & (x[..., :-1] < xn)
            if not np.all(inside):
                raise DomainError('Points must lie strictly inside H_1 (0 < x_i < x_n < 1).')
        return x

    def map_eval(self, x, check=True):
        x = self._points(x, check)
        xn = x[..., -1:]
        y = np.empty_like(x)
        y[..., :-1] = x[..., :-1] / xn * np.power(xn, self.exponents)
        y[..., -1] = np.power(x[..., -1], self.a)
        return y

    def map_closure(self, x):
        """φ_a extended continuously to the closure of H_1, the tip going to the origin."""
        x = self._points(x, False)
        xn = x[..., -1:]
        ratio = np.divide(x[..., :-1], xn, out=np.zeros_like(x[..., :-1]), where=xn > 0)
        y = np.empty_like(x)
        y[..., :-1] = ratio * np.power(xn, self.exponents)
        y[..., -1] = np.power(x[..., -1], self.a)
        return y

    def inverse(self, y, check=True):
        y = np.asarray(y, dtype=float)
        if check and not np.all(self.profile.contains(y)):
            raise DomainError('Points must lie strictly inside H_g.')

        xn = np.power(y[..., -1:], 1.0 / self.a)
        x = np.empty_like(y)
        x[..., :-1] = y[..., :-1] * np.power(xn, 1.0 - self.exponents)
        x[..., -1] = xn[..., 0]
        return x

    def jacobian_det(self, x, check=True):
        x = self._points(x, check)
        return self.a * np.power(x[..., -1], self.a * self.profile.gamma_total - self.n)

    def jacobian_matrix(self, x, check=True):
        x = self._points(x, check)
        n = self.n
        xn = x[..., -1]
        matrix = np.zeros(x.shape[:-1] + (n, n))
        for i, ag in enumerate(self.exponents):
            matrix[..., i, i] = np.power(xn, ag - 1)
            matrix[..., i, -1] = (ag - 1) * x[..., i] * np.power(xn, ag - 2)
        matrix[..., -1, -1] = self.a * np.power(xn, self.a - 1)
        return matrix

    def spectral_norm(self, x, check=True):
        """Operator norm |Dφ_a(x)|."""
        return np.linalg.norm(self.jacobian_matrix(x, check), ord=2, axis=(-2, -1))

    def distortion_radicand(self, variant=DistortionVariant.CORRECTED):
        a, n = self.a, self.n
        if variant is DistortionVariant.SIMPLIFIED:
            return a * a * (self.profile.gamma_square_sum + 1) - 2 * a * self.profile.gamma_sum
        return math.fsum((ag - 1) ** 2 for ag in self.exponents) + (n - 1) + a * a

    def distortion_bound(self, x, variant=DistortionVariant.CORRECTED, check=True):
        x = self._points(x, check)
        radicand = self.distortion_radicand(variant)
        if radicand < 0:
            raise InvalidVariantError(variant.value, radicand)
        return np.power(x[..., -1], self.a - 1) * math.sqrt(radicand)

    def distortion_exponent(self, p):
        """Power of x_n in |Dφ_a|^p / J, up to a bounded factor."""
        return p * (self.a - 1) - (self.a * self.profile.gamma_total - self.n)

    def has_finite_distortion(self, p):
        return self.distortion_exponent(p) >= -1e-12

    def _rescaled_matrix(self, u, t):
        # Dφ_a = t^{a-1} · this matrix, with u_i = x_i / x_n in [0, 1]
        n = self.n
        matrix = np.zeros(t.shape + (n, n))
        for i, ag in enumerate(self.exponents):
            scale = np.power(t, ag - self.a)
            matrix[..., i, i] = scale
            matrix[..., i, -1] = (ag - 1) * u[..., i] * scale
        matrix[..., -1, -1] = self.a
        return matrix

    def distortion_sup(self, p, samples=65):
        """sup over H_1 of (|Dφ_a|^p / J)^{1/p}, sampled on a closed grid.

        Finite exactly when p(a - 1) >= aγ - n, in which case the supremand extends continuously to
        the closure of H_1.
        """
        if not self.has_finite_distortion(p):
            raise DomainError(f'(|Dφ|^p/J)^(1/p) is unbounded for a={self.a}, p={p} '
                              f'(exponent {self.distortion_exponent(p):.6g} < 0).')

        nodes = np.linspace(0.0, 1.0, samples)
        grid = np.array(list(itertools.product(nodes, repeat=self.n)))
        u, t = grid[:, :-1], grid[:, -1]
        norms = np.linalg.norm(self._rescaled_matrix(u, t), ord=2, axis=(-2, -1))
        values = np.power(t, max(self.distortion_exponent(p), 0.0) / p) * norms / self.a ** (1.0 / p)
        sup = float(values.max())
        log.debug(f'Sampled distortion sup {sup:.6g} for a={self.a}, p={p} on {samples}^{self.n} points')
        return sup

    def distortion_sup_bound(self, p):
        """Closed-form upper bound a^{-1/p} sqrt(radicand) of distortion_sup."""
        return self.a ** (-1.0 / p) * math.sqrt(self.distortion_radicand())
