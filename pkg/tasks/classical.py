from cuspbound.bounds import classical_bounds
from utils.config import REQUIRED


def setup(runner):
    runner.add_task(Classical(runner))


class Classical:
    """Payne–Weinberger, ENT and Szegő–Weinberger bounds from a diameter and a volume."""
    name = 'classical'
    formats = ('json',)

    def __init__(self, runner):
        self.runner = runner

    def validate(self, conf):
        params = {'n': conf.get_int('n', 2), 'p': conf.get_float('p', 2.0),
                  'diameter': conf.get_float('diameter', REQUIRED), 'volume': conf.get_float('volume', REQUIRED)}
        for key in ('diameter', 'volume'):
            if not params[key] > 0:
                raise conf.error(key, f'Must be > 0, got {params[key]!r}.')
        if params['n'] < 2:
            raise conf.error('n', f'Need n >= 2, got {params["n"]}.')
        if not params['p'] > 1:
            raise conf.error('p', f'Need p > 1, got {params["p"]!r}.')
        return params

    def run(self, params, seed, mapper):
        return classical_bounds(**params).to_dict()
