"""Lower bound <= discrete μ_p <= Szegő–Weinberger, on one mesh."""
import logging
from dataclasses import dataclass

from cuspbound.bounds import SearchOpts, cusp_mu_lower, ent_lower, szego_weinberger_upper
from cuspbound.errors import NoBoundAvailable
from cuspbound.fem.eigen import mu2_fem
from cuspbound.fem.rayleigh import mup_rayleigh

log = logging.getLogger(__name__)

UPPER_SLACK = 0.02


@dataclass
class BracketReport:
    p: float
    lower: float
    lower_kind: str
    mu2: float
    mup: float
    sw_upper: float
    bound: dict = None

    @property
    def lower_ok(self):
        return self.lower is None or self.lower <= self.mup

    @property
    def upper_ok(self):
        return bool(self.mup <= self.sw_upper * (1 + UPPER_SLACK))

    @property
    def sw_ratio(self):
        return self.mup / self.sw_upper

    @property
    def status(self):
        return 'PASS' if self.lower_ok and self.upper_ok else 'FAIL'

    def to_dict(self):
        return {
            'p': self.p,
            'lower': self.lower,
            'lower_kind': self.lower_kind,
            'mu2_fem': self.mu2,
            'mup_rayleigh': self.mup,
            'discretization': True,
            'sw_upper': self.sw_upper,
            'sw_ratio': self.sw_ratio,
            'lower_ok': self.lower_ok,
            'upper_ok': self.upper_ok,
            'status': self.status,
            'bound': self.bound,
        }


def bracket_check(mesh, p, profile=None, restarts=8, iters=500, seed=0, search=SearchOpts(), mapper=map):
    """Compare the discrete μ_p with the lower bound of the domain and the Szegő–Weinberger bound.

    With a cusp profile the lower bound is the optimised cusp bound, otherwise the mesh is taken as
    a convex domain and the (π_p/d)^p bound applies.
    """
    bound = None
    if profile is not None:
        lower_kind = 'cusp'
        try:
            if not p < profile.gamma_total:
                raise NoBoundAvailable(f'p={p} is not below γ={profile.gamma_total}.')
            report = cusp_mu_lower(profile, p, search, mapper=mapper)
            lower, bound = report.mu_lower, report.to_dict()
        except NoBoundAvailable as e:
            log.info(f'No cusp bound for p={p}: {e}')
            lower, lower_kind = None, None
    else:
        lower_kind = 'convex'
        lower = ent_lower(mesh.diameter(), p)

    mup = mup_rayleigh(mesh, p, restarts=restarts, iters=iters, seed=seed, mapper=mapper).value
    result = BracketReport(p=p, lower=lower, lower_kind=lower_kind, mu2=mu2_fem(mesh), mup=mup,
                           sw_upper=szego_weinberger_upper(2, mesh.area()), bound=bound)
    if result.status == 'FAIL':
        log.warning(f'Bracket violated on {mesh}: {result.to_dict()}')
    return result
