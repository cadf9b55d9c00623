"""
Deterministic quadrature of the integrals behind K_{p,q}, M_{r,p} and π_p.

Integrals over H_1 use the substitution x_i = u_i·x_n, which turns H_1 into (0,1)^{n-1} × (0,1)
with the weight x_n^{n-1}, then a tensor Gauss–Legendre rule in u and dyadic cells
[2^{-k-1}, 2^{-k}] in x_n. Every integrand here behaves like a pure power of x_n near the tip, so
the part below the last cell is added from the leading power instead of being integrated.
"""
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from cuspbound.errors import DivergentIntegralError, DomainError, PrecisionError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadSpec:
    nodes_1d: int = 16
    levels: int = 40
    tol: float = 1e-8

    def __post_init__(self):
        if self.nodes_1d < 2:
            raise DomainError(f'Need at least 2 Gauss nodes, got {self.nodes_1d}.')
        if self.levels < 1:
            raise DomainError(f'Need at least 1 dyadic level, got {self.levels}.')
        if not self.tol > 0:
            raise DomainError(f'Tolerance must be > 0, got {self.tol}.')

    def rule(self):
        """Gauss–Legendre nodes and weights on [0, 1]."""
        nodes, weights = leggauss(self.nodes_1d)
        return (nodes + 1) / 2, weights / 2


def _cross_section_rule(spec, dim):
    nodes, weights = spec.rule()
    if dim == 0:
        return np.zeros((1, 0)), np.ones(1)
    points = np.array(list(itertools.product(nodes, repeat=dim)))
    products = np.prod(np.array(list(itertools.product(weights, repeat=dim))), axis=1)
    return points, products


def integrate_h1(integrand, n, exponent, name, spec=QuadSpec()):
    """∫_{H_1} integrand(x) dx for an integrand vectorised over points of shape (..., n).

    `exponent` is the leading power c of F(t) = t^{n-1} ∫ integrand(u·t, t) du as t -> 0; the
    integral is finite iff c > -1.
    """
    if exponent <= -1:
        raise DivergentIntegralError(name, exponent)

    nodes, weights = spec.rule()
    u, u_weights = _cross_section_rule(spec, n - 1)

    def cross_section(t):
        # F(t) for every t of a 1-D array
        points = np.empty((t.size, u.shape[0], n))
        points[..., :-1] = u[None, :, :] * t[:, None, None]
        points[..., -1] = t[:, None]
        return t ** (n - 1) * (integrand(points) @ u_weights)

    total = 0.0
    estimates = []
    for level in range(spec.levels):
        lo, hi = 2.0 ** (-level - 1), 2.0 ** -level
        t = lo + (hi - lo) * nodes
        total += (hi - lo) * float(cross_section(t) @ weights)

        tail = lo * float(cross_section(np.array([lo]))[0]) / (exponent + 1)
        estimates.append(total + tail)

        if level >= 2 and abs(estimates[-1] - estimates[-2]) <= spec.tol * abs(estimates[-1]):
            log.debug(f'{name} converged after {level + 1} levels : {estimates[-1]!r}')
            return estimates[-1]

    if len(estimates) < 2:
        estimates.insert(0, math.nan)
    raise PrecisionError(name, estimates[-2:], spec.tol)


def k_pq_numeric(m, p, q, spec=QuadSpec()):
    """K_{p,q}(φ_a; H_1) from its defining integral, with the true operator norm of Dφ_a."""
    if not 1 < q < p:
        raise DomainError(f'Need 1 < q < p, got q={q}, p={p}.')
    power = q / (p - q)

    def integrand(x):
        return (m.spectral_norm(x, check=False) ** p / m.jacobian_det(x, check=False)) ** power

    value = integrate_h1(integrand, m.n, power * m.distortion_exponent(p) + m.n - 1, 'K_{p,q}', spec)
    return value ** ((p - q) / (p * q))


def m_rp_numeric(m, r, p, spec=QuadSpec()):
    if not r > p:
        raise DomainError(f'Need r > p, got r={r}, p={p}.')
    power = r / (r - p)

    def integrand(x):
        return m.jacobian_det(x, check=False) ** power

    beta = (m.a * m.profile.gamma_total - m.n) * power + m.n - 1
    value = integrate_h1(integrand, m.n, beta, 'M_{r,p}', spec)
    return value ** ((r - p) / (r * p))


def transport_volume(m, spec=QuadSpec()):
    """∫_{H_1} J(x, φ_a) dx, equal to the volume 1/γ of H_g."""
    return integrate_h1(lambda x: m.jacobian_det(x, check=False), m.n, m.a * m.profile.gamma_total - 1,
                        'transport volume', spec)


def pi_p_integral(p, spec=QuadSpec()):
    """π_p = 2 ∫_0^T (1 - t^p/(p-1))^{-1/p} dt with T = (p-1)^{1/p}.

    With t = T(1 - w) the integrand becomes h(w)^{-1/p}·w^{-1/p}, h(w) = (1 - (1-w)^p)/w smooth
    and positive on [0, 1], so the endpoint singularity goes to an algebraic weight.
    """
    if not p > 1:
        raise DomainError(f'π_p needs p > 1, got {p}.')
    scale = (p - 1) ** (1 / p)

    def smooth(w):
        if w <= 0:
            return p ** (-1 / p)
        if w >= 1:
            return 1.0
        return (-math.expm1(p * math.log1p(-w)) / w) ** (-1 / p)

    value, error = integrate.quad(smooth, 0.0, 1.0, weight='alg', wvar=(-1 / p, 0.0),
                                  epsabs=0.0, epsrel=spec.tol * 1e-2, limit=200)
    log.debug(f'π_{p} integral : {2 * scale * value!r} (error estimate {2 * scale * error:.3e})')
    return 2 * scale * value
