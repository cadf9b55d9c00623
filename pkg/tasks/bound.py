import logging

from cuspbound.bounds import bounded_jacobian_mu_lower, cusp_mu_lower
from cuspbound.errors import DomainError, NumericalError
from tasks._common import profile_from_config, search_from_config
from utils.config import REQUIRED

log = logging.getLogger(__name__)


def setup(runner):
    runner.add_task(Bound(runner))


class Bound:
    """Optimised lower bound of μ_p on a cusp domain, both distortion variants side by side."""
    name = 'bound'
    formats = ('json',)

    def __init__(self, runner):
        self.runner = runner

    def validate(self, conf):
        params = {'profile': profile_from_config(conf), 'p': conf.get_float('p', REQUIRED),
                  'search': search_from_config(conf)}
        if not 1 < params['p'] < params['profile'].gamma_total:
            raise conf.error('p', f'Need 1 < p < γ = {params["profile"].gamma_total!r}, got {params["p"]!r}.')
        return params

    def run(self, params, seed, mapper):
        profile, p = params['profile'], params['p']
        report = cusp_mu_lower(profile, p, params['search'], mapper=mapper)
        result = report.to_dict()

        # The p = r estimate needs a bounded Jacobian, rarely available on a cusp
        try:
            result['bounded_jacobian'] = bounded_jacobian_mu_lower(report.a_star, profile, p, report.exponents.q,
                                                                   params['search'].variant)
        except (DomainError, NumericalError) as e:
            log.debug(f'No bounded Jacobian estimate: {e}')
            result['bounded_jacobian'] = None
        return result
