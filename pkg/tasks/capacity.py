import logging

from cuspbound.fem import CondenserSpec, annulus_capacity, capacity_p, capacity_transfer_check
from tasks._common import annulus_plates, build_mesh, mesh_params_from_config, plate_from_config

log = logging.getLogger(__name__)


def setup(runner):
    runner.add_task(Capacity(runner))


class Capacity:
    """p-capacity of a condenser on a mesh, with the transfer check through φ_a on cusps."""
    name = 'capacity'
    formats = ('json',)

    def __init__(self, runner):
        self.runner = runner

    def validate(self, conf):
        mesh = mesh_params_from_config(conf)
        default0 = default1 = None
        if mesh['domain'] == 'annulus':
            default0, default1 = annulus_plates(mesh['inner'], mesh['outer'])

        params = {
            'mesh': mesh,
            'p': conf.get_float('p', 2.0),
            'condenser': CondenserSpec(plate_from_config(conf, 'plate0', default0),
                                       plate_from_config(conf, 'plate1', default1)),
            'oracle': mesh['domain'] == 'annulus' and 'plate0' not in conf and 'plate1' not in conf,
            'a': conf.get_float('a'),
            'mesh_tol': conf.get_float('mesh_tol', 0.02),
            'tol': conf.get_float('tol', 1e-8),
        }
        if not params['p'] > 1:
            raise conf.error('p', f'Need p > 1, got {params["p"]!r}.')
        if params['a'] is not None:
            if mesh['domain'] not in ('cusp', 'h1'):
                raise conf.error('a', 'The transfer check runs on cusp domains only.')
            if not params['a'] > 0:
                raise conf.error('a', f'Need a > 0, got {params["a"]!r}.')
        return params

    def run(self, params, seed, mapper):
        mesh, profile = build_mesh(params['mesh'])
        p = params['p']
        capacity = capacity_p(mesh, params['condenser'], p, tol=params['tol'])
        result = {
            'mesh': {**params['mesh'], 'n_vertices': mesh.n_vertices, 'n_triangles': mesh.n_triangles},
            'p': p,
            'capacity': capacity.value,
            'newton_iterations': capacity.iterations,
            'gradient_norm': capacity.gradient_norm,
        }

        if params['oracle']:
            exact = annulus_capacity(params['mesh']['inner'], params['mesh']['outer'], p)
            result['radial'] = {'capacity': exact, 'relative_error': abs(capacity.value - exact) / exact}

        if params['a'] is not None:
            transfer = capacity_transfer_check(profile, params['a'], p, params['condenser'], h=params['mesh']['h'],
                                               mesh_tol=params['mesh_tol'],
                                               grading_levels=params['mesh']['grading_levels'])
            result['transfer'] = transfer.to_dict()
            if not transfer.passed:
                log.warning(f'Capacity transfer check failed: {result["transfer"]}')
        return result
