import logging

from cuspbound.fem import bracket_check, neumann_eigenpair, save_field, save_mesh
from tasks._common import build_mesh, mesh_params_from_config, search_from_config

log = logging.getLogger(__name__)


def setup(runner):
    runner.add_task(Eig(runner))


class Eig:
    """Discrete μ_2 and μ_p on a planar mesh, bracketed by the lower bound and Szegő–Weinberger."""
    name = 'eig'
    formats = ('json',)

    def __init__(self, runner):
        self.runner = runner

    def validate(self, conf):
        params = {
            'mesh': mesh_params_from_config(conf),
            'p': conf.get_floats('p', (2.0,)),
            'restarts': conf.get_int('restarts', 8),
            'iters': conf.get_int('iters', 500),
            'search': search_from_config(conf),
            'mesh_out': conf.get_str('mesh_out'),
            'field_out': conf.get_str('field_out'),
        }
        if not all(p > 1 for p in params['p']):
            raise conf.error('p', 'Every p must be > 1.')
        if params['restarts'] < 0 or params['iters'] < 1:
            raise conf.error('restarts' if params['restarts'] < 0 else 'iters', 'Need restarts >= 0 and iters >= 1.')
        return params

    def run(self, params, seed, mapper):
        mesh, profile = build_mesh(params['mesh'])
        log.info(f'Meshed {params["mesh"]["domain"]}: {mesh}')
        audit = mesh.audit()
        if not audit['conforming']:
            log.warning(f'Mesh audit failed: {audit}')

        mu2, field = neumann_eigenpair(mesh)
        if params['mesh_out']:
            save_mesh(mesh, params['mesh_out'])
        if params['field_out']:
            save_field(field.values, params['field_out'])

        brackets = [bracket_check(mesh, p, profile, restarts=params['restarts'], iters=params['iters'], seed=seed,
                                  search=params['search'], mapper=mapper)
                    for p in params['p']]
        return {
            'mesh': {
                **params['mesh'],
                'n_vertices': mesh.n_vertices,
                'n_triangles': mesh.n_triangles,
                'area': mesh.area(),
                'diameter': mesh.diameter(),
                'grading': mesh.grading,
                'audit': audit,
            },
            'mu2_fem': mu2,
            'brackets': [bracket.to_dict() for bracket in brackets],
            'status': 'PASS' if all(bracket.status == 'PASS' for bracket in brackets) else 'FAIL',
        }
