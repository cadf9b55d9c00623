"""
Closed forms of every constant in the eigenvalue estimate

    1/μ_p(H_g) <= K_{p,q}^p · M_{r,p}^p · B_{r,q}^p

and the classical comparison bounds for convex domains and balls.
"""
import functools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from cuspbound.cusp_map import CuspMap, DistortionVariant
from cuspbound.domain import AInterval, ExponentConfig, admissible_a_interval
from cuspbound.errors import (DivergentIntegralError, DomainError, InvalidVariantError, NoBoundAvailable,
                              UnboundedConstantError)

log = logging.getLogger(__name__)


# Classical bounds

def omega(n):
    """Volume of the unit n-ball."""
    return math.pi ** (n / 2) / special.gamma(n / 2 + 1)


def pi_p(p):
    if not p > 1:
        raise DomainError(f'π_p needs p > 1, got {p}.')
    return 2 * math.pi * (p - 1) ** (1 / p) / (p * math.sin(math.pi / p))


def ent_lower(d, p):
    if not d > 0:
        raise DomainError(f'Diameter must be > 0, got {d}.')
    return (pi_p(p) / d) ** p


def payne_weinberger_lower(d):
    if not d > 0:
        raise DomainError(f'Diameter must be > 0, got {d}.')
    return math.pi ** 2 / d ** 2


@functools.lru_cache(maxsize=None)
def ball_neumann_root(n):
    """First positive zero of (t^{1-n/2} J_{n/2}(t))'.

    Multiplying the derivative by t^{n/2} leaves (1 - n/2) J_ν(t) + t J_ν'(t) with ν = n/2, which is
    positive near 0; the first sign change on a fine scan is polished by Brent's method.
    """
    if n < 2:
        raise DomainError(f'Unsupported dimension {n}.')
    nu = n / 2

    def derivative(t):
        return (1 - nu) * special.jv(nu, t) + t * special.jvp(nu, t)

    grid = np.linspace(1e-3, 10 + 2 * n, 4000)
    values = derivative(grid)
    changes = np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]
    if not changes.size:
        raise DomainError(f'No sign change found for the ball root in dimension {n}.')

    i = changes[0]
    root = optimize.brentq(derivative, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
    log.debug(f'Neumann ball root for n={n}: {root!r}')
    return root


def szego_weinberger_upper(n, volume):
    if not volume > 0:
        raise DomainError(f'Volume must be > 0, got {volume}.')
    radius = (volume / omega(n)) ** (1 / n)
    return ball_neumann_root(n) ** 2 / radius ** 2


@dataclass(frozen=True)
class ClassicalBounds:
    n: int
    p: float
    diameter: float
    volume: float
    ball_radius: float
    pw_lower: float
    ent_lower: float
    sw_upper: float

    def to_dict(self):
        return dict(self.__dict__)


def classical_bounds(n, p, diameter, volume):
    """Payne–Weinberger and ENT lower bounds (convex domains) and the Szegő–Weinberger upper bound."""
    return ClassicalBounds(n=n, p=p, diameter=diameter, volume=volume,
                           ball_radius=(volume / omega(n)) ** (1 / n),
                           pw_lower=payne_weinberger_lower(diameter),
                           ent_lower=ent_lower(diameter, p),
                           sw_upper=szego_weinberger_upper(n, volume))


# Constants of the cusp estimate

def vertex_a(profile):
    """Minimiser of the quadratic distortion radicand in a."""
    return profile.gamma_sum / (profile.gamma_square_sum + 1)


def k_pq_exponent(a, profile, p, q):
    """Exponent e with (|Dφ_a|^p / J)^{q/(p-q)} <= C x_n^e, the K integral is finite iff e + n > 0."""
    return q * (p * (a - 1) - (a * profile.gamma_total - profile.n)) / (p - q)


def k_pq_closed(a, profile, p, q, variant=DistortionVariant.CORRECTED):
    """Upper bound of K_{p,q}(φ_a; H_1).

    Both variants use a^{-1/p} sqrt(radicand). The corrected one also keeps the factor
    (1/(e + n))^{(p-q)/(pq)} of the x_n integral when it exceeds 1, which happens on the upper
    part of the admissible interval where e + n < 1.
    """
    interval = admissible_a_interval(profile, p, q)
    slack = 1e-12 * max(1.0, abs(interval.hi))
    if not interval.lo - slack <= a <= interval.hi + slack:
        raise DomainError(f'a={a} lies outside the closure of I_a = [{interval.lo}, {interval.hi}].')

    radicand = CuspMap(a, profile).distortion_radicand(variant)
    if radicand < 0:
        raise InvalidVariantError(variant.value, radicand)
    value = a ** (-1 / p) * math.sqrt(radicand)

    if variant is DistortionVariant.CORRECTED:
        tail = k_pq_exponent(a, profile, p, q) + profile.n
        if tail <= 0:
            raise DivergentIntegralError('K_{p,q}', tail - 1)
        value *= max(1.0, tail ** (-(p - q) / (p * q)))
    return value


def m_rp_beta(a, profile, r, p):
    return (a * profile.gamma_total - profile.n) * r / (r - p) + profile.n - 1


def m_rp_exact(a, profile, r, p):
    if not r > p:
        raise DomainError(f'M_(r,p) needs r > p, got r={r}, p={p}.')
    beta = m_rp_beta(a, profile, r, p)
    if beta <= -1:
        raise DivergentIntegralError('M_{r,p}', beta)
    return a ** (1 / p) * (1 / (beta + 1)) ** ((r - p) / (r * p))


def m_rp_shortcut(a, p):
    """The a^{1/p} estimate of M_{r,p}, only valid when β >= 0."""
    return a ** (1 / p)


def m_r_sup(a, profile, r):
    """ess sup of J(x, φ_a)^{1/r}, finite iff aγ >= n."""
    if a * profile.gamma_total < profile.n:
        raise UnboundedConstantError(f'J(x, φ_a) is unbounded for aγ = {a * profile.gamma_total:.6g} < n.')
    return a ** (1 / r)


def b_rq_h1(n, q, r):
    delta = 1 / q - 1 / r
    if delta < 0:
        raise DomainError(f'Need r >= q, got q={q}, r={r}.')
    if delta >= 1 / n:
        raise UnboundedConstantError(f'B_(r,q)(H_1) is unbounded for δ = {delta:.6g} >= 1/n = {1 / n:.6g}.')

    return (n * ((1 - delta) / (1 / n - delta)) ** (1 - delta) * omega(n) ** (1 - 1 / n)
            * (1 / math.factorial(n + 1)) ** (1 / n - delta))


def composite_mu_lower(k, m, b, p):
    if not all(math.isfinite(c) and c > 0 for c in (k, m, b)):
        raise DomainError(f'Constants must be finite and > 0, got K={k}, M={m}, B={b}.')
    return (k * m * b) ** (-p)


def bounded_jacobian_mu_lower(a, profile, p, q, variant=DistortionVariant.CORRECTED):
    """Estimate with r = p and the ess sup constant M_p, usable when the Jacobian is bounded."""
    k = k_pq_closed(a, profile, p, q, variant)
    m = m_r_sup(a, profile, p)
    b = b_rq_h1(profile.n, q, p)
    return composite_mu_lower(k, m, b, p)


# Optimised estimate on the cusp

@dataclass(frozen=True)
class SearchOpts:
    """Search over (q, r) and a for cusp_mu_lower.

    Without explicit values, q is swept over (max(1, np/(n+p)), min(p, n)) and r over
    (p, nq/(n-q)) as r = (1 - η)·nq/(n-q) + η·p with η log-spaced.
    """
    q_points: int = 32
    r_points: int = 32
    q_values: tuple = None
    r_values: tuple = None
    refine: bool = True
    boundary_margin: float = 1e-2
    variant: DistortionVariant = DistortionVariant.CORRECTED
    a_objective: str = 'radicand'

    def __post_init__(self):
        if self.a_objective not in ('radicand', 'product'):
            raise DomainError(f'Unknown a objective "{self.a_objective}".')
        if not 0 < self.boundary_margin < 0.5:
            raise DomainError(f'Boundary margin must lie in (0, 0.5), got {self.boundary_margin}.')


@dataclass(frozen=True)
class BoundReport:
    profile: object
    exponents: ExponentConfig
    a_star: float
    k_pq: float
    m_rp: float
    b_rq: float
    mu_lower: float
    variant: DistortionVariant
    a_on_boundary: bool
    a_interval: AInterval
    a_vertex: float
    k_pq_simplified: float = None
    m_rp_shortcut: float = None
    mu_lower_simplified: float = None
    extrapolated: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'extrapolated', self.profile.n < 3)

    @property
    def simplified_valid(self):
        return self.k_pq_simplified is not None

    def to_dict(self):
        return {
            'n': self.profile.n,
            'gammas': list(self.profile.gammas),
            'gamma_total': self.profile.gamma_total,
            'p': self.exponents.p,
            'q': self.exponents.q,
            'r': self.exponents.r,
            'delta': self.exponents.delta,
            'a_interval': [self.a_interval.lo, self.a_interval.hi],
            'a_vertex': self.a_vertex,
            'a_star': self.a_star,
            'a_on_boundary': self.a_on_boundary,
            'variant': self.variant.value,
            'k_pq': self.k_pq,
            'm_rp': self.m_rp,
            'b_rq': self.b_rq,
            'mu_lower': self.mu_lower,
            'simplified': {
                'valid': self.simplified_valid,
                'k_pq': self.k_pq_simplified,
                'm_rp_shortcut': self.m_rp_shortcut,
                'mu_lower': self.mu_lower_simplified,
            },
            'extrapolated': self.extrapolated,
        }


def _a_range(profile, exps):
    """Closure of I_a ∩ (np/(γr), ∞) and whether its lower end is the divergent M endpoint."""
    n, gamma, p = profile.n, profile.gamma_total, exps.p
    interval = admissible_a_interval(profile, p, exps.q)
    m_lower = n * p / (gamma * exps.r)
    return interval.raise_lower(max(m_lower, 0.0)), m_lower >= interval.lo


def _choose_a(profile, exps, interval, lower_diverges, opts):
    margin = opts.boundary_margin * interval.width
    vertex = vertex_a(profile)

    if opts.a_objective == 'product':
        def objective(a):
            try:
                k = k_pq_closed(a, profile, exps.p, exps.q, opts.variant)
                m = m_rp_exact(a, profile, exps.r, exps.p)
            except (DivergentIntegralError, InvalidVariantError):
                return 1e300
            # a zero radicand gives K = 0, no estimate
            return math.log(k) + math.log(m) if k > 0 else 1e300

        lo = interval.lo + margin if lower_diverges else interval.lo
        result = optimize.minimize_scalar(objective, bounds=(lo, interval.hi - margin), method='bounded',
                                          options={'xatol': 1e-12 * max(1.0, interval.hi)})
        a = float(result.x)
        return a, not interval.contains(vertex)

    a = interval.clamp(vertex)
    on_boundary = a != vertex
    if a >= interval.hi:
        a = interval.hi - margin
    elif a <= interval.lo and lower_diverges:
        a = interval.lo + margin
    return a, on_boundary


def bound_for_exponents(profile, exps, opts=SearchOpts()):
    """BoundReport for one (q, r), or None when no a is admissible for it."""
    if not exps.p < profile.gamma_total:
        raise DomainError(f'Need p < γ, got p={exps.p}, γ={profile.gamma_total}.')
    if not exps.r > exps.p or not exps.r < exps.r_upper(profile.n):
        return None

    interval, lower_diverges = _a_range(profile, exps)
    if not interval.nonempty or interval.hi <= 0:
        return None

    a, on_boundary = _choose_a(profile, exps, interval, lower_diverges, opts)
    try:
        k = k_pq_closed(a, profile, exps.p, exps.q, opts.variant)
        m = m_rp_exact(a, profile, exps.r, exps.p)
        b = b_rq_h1(profile.n, exps.q, exps.r)
    except (InvalidVariantError, DivergentIntegralError, UnboundedConstantError) as e:
        log.debug(f'Skipping q={exps.q}, r={exps.r}: {e}')
        return None
    if k <= 0:
        log.debug(f'Skipping q={exps.q}, r={exps.r}: zero distortion radicand at a={a}')
        return None

    try:
        k_simplified = k_pq_closed(a, profile, exps.p, exps.q, DistortionVariant.SIMPLIFIED)
    except InvalidVariantError:
        k_simplified = None
    if k_simplified is not None and k_simplified <= 0:
        k_simplified = None
    # a^{1/p} is reported only, it underestimates M_(r,p) when β < 0
    m_short = m_rp_shortcut(a, exps.p)
    mu_simplified = composite_mu_lower(k_simplified, m, b, exps.p) if k_simplified else None

    return BoundReport(profile=profile, exponents=exps, a_star=a, k_pq=k, m_rp=m, b_rq=b,
                       mu_lower=composite_mu_lower(k, m, b, exps.p), variant=opts.variant,
                       a_on_boundary=on_boundary, a_interval=interval, a_vertex=vertex_a(profile),
                       k_pq_simplified=k_simplified, m_rp_shortcut=m_short, mu_lower_simplified=mu_simplified)


def _ranking(report):
    # Largest bound first, ties broken by smaller q then smaller r
    return (-report.mu_lower, report.exponents.q, report.exponents.r)


def _q_range(profile, p):
    n = profile.n
    return max(1.0, p * n / (n + p)), min(p, float(n))


def _r_from_eta(profile, p, q, eta):
    if q >= profile.n:
        return None
    r_max = profile.n * q / (profile.n - q)
    return (1 - eta) * r_max + eta * p if r_max > p else None


def _cell(profile, p, q, r, opts):
    if r is None:
        return None
    try:
        exps = ExponentConfig(p, q, r)
    except DomainError:
        return None
    return bound_for_exponents(profile, exps, opts)


def _explicit_cell(args):
    profile, p, q, r, opts = args
    return _cell(profile, p, q, r, opts)


def _grid_cell(args):
    profile, p, q, eta, opts = args
    return _cell(profile, p, q, _r_from_eta(profile, p, q, eta), opts)


def _refine(profile, p, best, qs, etas, opts):
    """Bounded scalar refinement in q, then in η, inside the neighbouring cells of the best one."""
    q0 = best.exponents.q
    eta0 = (_r_from_eta(profile, p, q0, 0.0) - best.exponents.r) / (_r_from_eta(profile, p, q0, 0.0) - p)

    def neighbours(values, value):
        i = int(np.argmin(np.abs(values - value)))
        return values[max(i - 1, 0)], values[min(i + 1, len(values) - 1)]

    def score(report):
        return -math.log(report.mu_lower) if report else 1e300

    lo, hi = sorted(neighbours(qs, q0))
    if hi > lo:
        result = optimize.minimize_scalar(lambda q: score(_grid_cell((profile, p, q, eta0, opts))),
                                          bounds=(lo, hi), method='bounded', options={'xatol': 1e-10})
        candidate = _grid_cell((profile, p, float(result.x), eta0, opts))
        if candidate and candidate.mu_lower > best.mu_lower:
            best, q0 = candidate, float(result.x)

    lo, hi = sorted(neighbours(etas, eta0))
    if hi > lo:
        result = optimize.minimize_scalar(lambda eta: score(_grid_cell((profile, p, q0, eta, opts))),
                                          bounds=(lo, hi), method='bounded', options={'xatol': 1e-10})
        candidate = _grid_cell((profile, p, q0, float(result.x), opts))
        if candidate and candidate.mu_lower > best.mu_lower:
            best = candidate
    return best


def cusp_mu_lower(profile, p, search=SearchOpts(), mapper=map):
    """Best lower bound of μ_p(H_g) over the (q, r) search and a in the admissible interval.

    `mapper` evaluates the grid cells, any order-preserving map works (the reduction is
    deterministic).
    """
    if not 1 < p < profile.gamma_total:
        raise DomainError(f'Need 1 < p < γ, got p={p}, γ={profile.gamma_total}.')

    if search.q_values is not None or search.r_values is not None:
        q_lo, q_hi = _q_range(profile, p)
        qs = search.q_values if search.q_values is not None else np.linspace(q_lo, q_hi, search.q_points + 2)[1:-1]
        cells = []
        for q in qs:
            if search.r_values is not None:
                cells.extend((q, r) for r in search.r_values)
            else:
                cells.extend((q, _r_from_eta(profile, p, q, eta)) for eta in np.geomspace(1e-3, 0.999, search.r_points))
        args = [(profile, p, float(q), None if r is None else float(r), search) for q, r in cells]
        reports = list(mapper(_explicit_cell, args))
        refine = False
    else:
        q_lo, q_hi = _q_range(profile, p)
        qs = q_hi - (q_hi - q_lo) * np.geomspace(1e-3, 0.999, search.q_points)
        etas = np.geomspace(1e-3, 0.999, search.r_points)
        args = [(profile, p, float(q), float(eta), search) for q in qs for eta in etas]
        reports = list(mapper(_grid_cell, args))
        refine = search.refine

    reports = [report for report in reports if report is not None]
    if not reports:
        raise NoBoundAvailable(f'No admissible (q, r, a) for n={profile.n}, γ={profile.gammas}, p={p}.')

    best = min(reports, key=_ranking)
    if refine:
        best = _refine(profile, p, best, np.sort(qs), etas, search)

    log.info(f'Cusp bound for γ={profile.gammas}, p={p}: μ >= {best.mu_lower:.6g} '
             f'(q={best.exponents.q:.6g}, r={best.exponents.r:.6g}, a={best.a_star:.6g})')
    return best
