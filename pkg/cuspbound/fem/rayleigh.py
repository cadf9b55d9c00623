"""
Discrete μ_p as the minimum over P1 fields of the Rayleigh quotient

    Q(f) = ∫|∇f|^p / min_c ∫|f - c|^p,

the denominator taken with the edge-midpoint rule (exact for p = 2, so Q then is the p = 2
generalized eigenproblem quotient).
"""
import logging
from dataclasses import dataclass

import numpy as np
from numpy.random import default_rng
from scipy import optimize

from cuspbound.errors import DomainError, NonConvergenceError
from cuspbound.fem.assembly import ScalarField, basis_gradients, midpoint_owners, midpoint_values
from cuspbound.fem.eigen import neumann_eigenpair

log = logging.getLogger(__name__)

STATIONARY = 1e-6


def _signed_power(x, exponent):
    return np.sign(x) * np.abs(x) ** exponent


def _p_mean(samples, weights, p):
    lo, hi = samples.min(), samples.max()
    if lo == hi:
        return float(lo)

    def derivative(c):
        return np.sum(weights * _signed_power(c - samples, p - 1))

    return optimize.brentq(derivative, lo, hi, xtol=1e-14 * max(1.0, abs(lo), abs(hi)),
                          rtol=4 * np.finfo(float).eps)


def p_mean(field, mesh, p):
    """The c minimising ∫|f - c|^p, found by bracketing the monotone derivative on [min f, max f]."""
    if not p > 1:
        raise DomainError(f'p must be > 1, got {p}.')
    values = field.values if isinstance(field, ScalarField) else np.asarray(field, dtype=float)
    samples = midpoint_values(mesh, values).ravel()
    weights = np.repeat(mesh.signed_areas() / 3, 3)
    return _p_mean(samples, weights, p)


class _Quotient:
    """Q and its gradient, vectorised over the mesh."""

    def __init__(self, mesh, p):
        self.mesh, self.p = mesh, p
        self.areas, self.gradients = basis_gradients(mesh)
        self.weights = np.repeat(self.areas / 3, 3)
        self.first, self.second = (owners.ravel() for owners in midpoint_owners(mesh))

    def __call__(self, f):
        p, tri = self.p, self.mesh.triangles
        grad = np.einsum('ti,tik->tk', f[tri], self.gradients)
        norm = np.linalg.norm(grad, axis=1)
        numerator = np.sum(self.areas * norm ** p)

        samples = midpoint_values(self.mesh, f).ravel()
        c = _p_mean(samples, self.weights, p)
        deviation = samples - c
        denominator = np.sum(self.weights * np.abs(deviation) ** p)
        if not denominator > 0:
            return np.inf, np.zeros_like(f)
        value = numerator / denominator

        safe = np.where(norm > 0, norm, 1.0)
        scale = np.where(norm > 0, safe ** (p - 2), 0.0)
        flux = p * (self.areas * scale)[:, None] * grad
        d_numerator = np.zeros_like(f)
        np.add.at(d_numerator, tri.ravel(), np.einsum('tk,tik->ti', flux, self.gradients).ravel())

        # c is optimal, so it does not contribute to the derivative of the denominator
        half = 0.5 * p * self.weights * _signed_power(deviation, p - 1)
        d_denominator = np.zeros_like(f)
        np.add.at(d_denominator, self.first, half)
        np.add.at(d_denominator, self.second, half)

        return value, (d_numerator - value * d_denominator) / denominator


@dataclass
class RayleighResult:
    value: float
    field: ScalarField
    p: float
    restarts: int
    successful: int
    discretization: bool = True

    def __float__(self):
        return self.value


def _normalise(f):
    f = f - f.mean()
    return f / np.abs(f).max()


def _descend(quotient, start, iters):
    initial, _ = quotient(start)
    result = optimize.minimize(quotient, start, jac=True, method='L-BFGS-B',
                               options={'maxiter': iters, 'ftol': 1e-13, 'gtol': 1e-10})
    value = float(result.fun)
    # status 2 is a failed line search, accepted only once the gradient has vanished
    stalled = result.status == 2 and np.linalg.norm(result.jac, np.inf) > STATIONARY * max(1.0, abs(value))
    progressed = bool(np.isfinite(value) and value <= initial and not stalled)
    if stalled:
        log.debug(f'Rayleigh descent stalled at {value!r}: {result.message}')
    return value, result.x, progressed


def mup_rayleigh(mesh, p, restarts=8, iters=500, seed=0, mapper=map):
    """Smallest quotient over a warm start from the p = 2 eigenfield and seeded random restarts.

    Restart k starts from default_rng(seed + k). The value is an upper estimate of the discrete
    infimum, hence the `discretization` flag of the result.
    """
    if not p > 1:
        raise DomainError(f'p must be > 1, got {p}.')
    if restarts < 0 or iters < 1:
        raise DomainError(f'Need restarts >= 0 and iters >= 1, got {restarts} and {iters}.')

    quotient = _Quotient(mesh, p)
    mu2, warm = neumann_eigenpair(mesh)
    starts = [_normalise(warm.values)]
    starts.extend(_normalise(default_rng(seed + k).standard_normal(mesh.n_vertices)) for k in range(restarts))

    outcomes = list(mapper(lambda start: _descend(quotient, start, iters), starts))
    successful = [(value, field) for value, field, progressed in outcomes if progressed]
    if not successful:
        raise NonConvergenceError(f'No Rayleigh descent made progress for p={p} on {mesh}',
                                  min(value for value, _, _ in outcomes))

    value, field = min(successful, key=lambda outcome: outcome[0])
    log.debug(f'μ_{p} <= {value!r} on {mesh} ({len(successful)}/{len(starts)} descents progressed, μ_2 = {mu2!r})')
    return RayleighResult(value=value, field=ScalarField.on(mesh, _normalise(field)), p=p,
                          restarts=len(starts), successful=len(successful))
