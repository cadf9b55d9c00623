import itertools
import logging

from cuspbound.bounds import b_rq_h1, bound_for_exponents, composite_mu_lower, cusp_mu_lower, k_pq_closed, m_rp_exact
from cuspbound.domain import ExponentConfig
from cuspbound.errors import DomainError, NumericalError
from tasks._common import profiles_from_config, search_from_config
from utils.config import REQUIRED

log = logging.getLogger(__name__)

COLUMNS = ('gammas', 'n', 'p', 'q', 'r', 'a', 'a_on_boundary', 'k_pq', 'm_rp', 'b_rq', 'mu_lower', 'k_pq_simplified',
           'mu_lower_simplified', 'status')

NOTES = (
    'rows follow the input order of profiles, p, then q, r and a when given',
    'mu_lower = (k_pq m_rp b_rq)^-p with the corrected distortion bound, *_simplified with the simplified one',
    'status : ok, or the reason no bound exists for the row',
)


def setup(runner):
    runner.add_task(Sweep(runner))


class Sweep:
    """Cusp bounds over Cartesian grids of profiles and exponents."""
    name = 'sweep'
    formats = ('csv',)

    def __init__(self, runner):
        self.runner = runner

    def validate(self, conf):
        params = {
            'profiles': profiles_from_config(conf),
            'p': conf.get_floats('p', REQUIRED),
            'q': conf.get_floats('q'),
            'r': conf.get_floats('r'),
            'a': conf.get_floats('a'),
            'search': search_from_config(conf),
        }
        if (params['q'] is None) != (params['r'] is None):
            raise conf.error('q' if params['q'] is None else 'r', 'q and r are swept together, give both or neither.')
        if params['a'] is not None and params['q'] is None:
            raise conf.error('a', 'A fixed a needs q and r.')
        if not all(p > 1 for p in params['p']):
            raise conf.error('p', 'Every p must be > 1.')
        return params

    def run(self, params, seed, mapper):
        if params['q'] is None:
            cells = itertools.product(params['profiles'], params['p'])
            rows = mapper(lambda cell: self.best_row(*cell, params['search']), cells)
        else:
            grids = [params['profiles'], params['p'], params['q'], params['r']]
            if params['a'] is not None:
                grids.append(params['a'])
            rows = mapper(lambda cell: self.cell_row(*cell, search=params['search']), itertools.product(*grids))
        return {'columns': COLUMNS, 'rows': rows, 'notes': NOTES}

    @staticmethod
    def _report_row(row, report):
        row.update(q=report.exponents.q, r=report.exponents.r, a=report.a_star, a_on_boundary=report.a_on_boundary,
                   k_pq=report.k_pq, m_rp=report.m_rp, b_rq=report.b_rq, mu_lower=report.mu_lower,
                   k_pq_simplified=report.k_pq_simplified, mu_lower_simplified=report.mu_lower_simplified, status='ok')
        return row

    def best_row(self, profile, p, search):
        row = {'gammas': profile.gammas, 'n': profile.n, 'p': p}
        if not p < profile.gamma_total:
            return {**row, 'status': 'p_not_below_gamma'}
        try:
            # Cells already run in parallel, the grid of each one stays serial
            return self._report_row(row, cusp_mu_lower(profile, p, search))
        except NumericalError as e:
            return {**row, 'status': type(e).__name__}

    def cell_row(self, profile, p, q, r, a=None, search=None):
        row = {'gammas': profile.gammas, 'n': profile.n, 'p': p, 'q': q, 'r': r, 'a': a}
        if not p < profile.gamma_total:
            return {**row, 'status': 'p_not_below_gamma'}
        try:
            exps = ExponentConfig(p, q, r)
            if a is None:
                report = bound_for_exponents(profile, exps, search)
                return self._report_row(row, report) if report else {**row, 'status': 'no_admissible_a'}

            row['k_pq'] = k_pq_closed(a, profile, p, q, search.variant)
            row['m_rp'] = m_rp_exact(a, profile, r, p)
            row['b_rq'] = b_rq_h1(profile.n, q, r)
            row['mu_lower'] = composite_mu_lower(row['k_pq'], row['m_rp'], row['b_rq'], p)
            row['status'] = 'ok'
        except DomainError as e:
            log.debug(f'Row {row} is outside the admissible region: {e}')
            row['status'] = 'outside_admissible'
        except NumericalError as e:
            row['status'] = type(e).__name__
        return row
