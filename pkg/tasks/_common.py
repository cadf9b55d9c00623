"""Config parsing shared by the tasks (not a task itself)."""
import math

from cuspbound.bounds import SearchOpts
from cuspbound.cusp_map import DistortionVariant
from cuspbound.domain import CuspProfile
from cuspbound.errors import DomainError
from cuspbound.fem import Disc, Rect, Ring, mesh_annulus, mesh_cusp_2d, mesh_disc, mesh_rectangle
from cuspbound.quadrature import QuadSpec
from utils.config import REQUIRED

DOMAINS = ('cusp', 'h1', 'square', 'rectangle', 'disc', 'annulus')


def _profile(conf, key, gammas, n=None):
    try:
        return CuspProfile(n if n is not None else len(gammas) + 1, tuple(gammas))
    except DomainError as e:
        raise conf.error(key, str(e))


def profile_from_config(conf, key='gammas'):
    gammas = conf.get_floats(key, REQUIRED)
    return _profile(conf, key, gammas, conf.get_int('n'))


def profiles_from_config(conf, key='profiles'):
    """`;` separated exponent lists, the dimension of each being one more than its length."""
    return tuple(_profile(conf, key, gammas) for gammas in conf.get_groups(key, REQUIRED))


def search_from_config(conf):
    variants = [variant.value for variant in DistortionVariant]
    try:
        return SearchOpts(q_points=conf.get_int('q_points', 32),
                          r_points=conf.get_int('r_points', 32),
                          q_values=conf.get_floats('q_values'),
                          r_values=conf.get_floats('r_values'),
                          refine=conf.get_bool('refine', True),
                          boundary_margin=conf.get_float('boundary_margin', 1e-2),
                          variant=DistortionVariant(conf.get_choice('variant', variants, 'corrected')),
                          a_objective=conf.get_choice('a_objective', ('radicand', 'product'), 'radicand'))
    except DomainError as e:
        raise conf.error(None, str(e))


def quad_spec_from_config(conf):
    try:
        return QuadSpec(nodes_1d=conf.get_int('nodes_1d', 16), levels=conf.get_int('levels', 40),
                        tol=conf.get_float('tol', 1e-8))
    except DomainError as e:
        raise conf.error(None, str(e))


def mesh_params_from_config(conf):
    domain = conf.get_choice('domain', DOMAINS, 'cusp')
    params = {'domain': domain, 'h': conf.get_float('h', 0.05)}
    if not 0 < params['h'] < 0.5:
        raise conf.error('h', f'Mesh size must lie in (0, 0.5), got {params["h"]}.')

    if domain in ('cusp', 'h1'):
        params['gamma1'] = 1.0 if domain == 'h1' else conf.get_float('gamma1', REQUIRED)
        params['grading_levels'] = conf.get_int('grading_levels', 6)
    elif domain == 'rectangle':
        params['width'], params['height'] = conf.get_float('width', 2.0), conf.get_float('height', 1.0)
    elif domain == 'disc':
        params['radius'] = conf.get_float('radius', 1.0)
    elif domain == 'annulus':
        params['inner'], params['outer'] = conf.get_float('inner', 1.0), conf.get_float('outer', 2.0)
    return params


def build_mesh(params):
    """The mesh and, for cusps, the matching planar profile."""
    domain, h = params['domain'], params['h']
    if domain in ('cusp', 'h1'):
        return (mesh_cusp_2d(params['gamma1'], h, params['grading_levels']),
                CuspProfile(2, (params['gamma1'],)))
    if domain == 'square':
        return mesh_rectangle(1.0, 1.0, h), None
    if domain == 'rectangle':
        return mesh_rectangle(params['width'], params['height'], h), None
    if domain == 'disc':
        return mesh_disc(params['radius'], h), None
    return mesh_annulus(params['inner'], params['outer'], h), None


SHAPES = {'disc': (Disc, 3), 'rect': (Rect, 4), 'ring': (Ring, (3, 4))}


def _shape(conf, key, text):
    kind, _, numbers = text.strip().partition(' ')
    if kind not in SHAPES:
        raise conf.error(key, f'Unknown plate shape "{kind}", expected one of {", ".join(SHAPES)}.')
    cls, arity = SHAPES[kind]
    try:
        values = [float(v) for v in numbers.split(',')]
    except ValueError:
        raise conf.error(key, f'Malformed numbers in "{text.strip()}".')
    if len(values) not in (arity if isinstance(arity, tuple) else (arity,)):
        raise conf.error(key, f'{kind} takes {arity} numbers, got {len(values)}.')

    if cls is Rect:
        return Rect(*values)
    return cls((values[0], values[1]), *values[2:])


def plate_from_config(conf, key, default=None):
    """A plate written as `shape numbers ; shape numbers`, e.g. `rect 0, 0.9, 1, 1 ; disc 0.5, 0.5, 0.1`."""
    text = conf.get_str(key)
    if text is None:
        if default is None:
            raise conf.error(key, 'Missing required key.')
        return default
    return tuple(_shape(conf, key, part) for part in text.split(';'))


def annulus_plates(inner, outer):
    return (Ring((0.0, 0.0), 0.0, inner),), (Ring((0.0, 0.0), outer, math.inf),)
