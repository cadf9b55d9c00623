import argparse
import logging
import os
import sys
from logging.handlers import RotatingFileHandler

import paths
from runner import RunConfig, Runner


class RunLogHandler(RotatingFileHandler):
    """RotatingFileHandler rolled over once per run, so run.log always holds the current run and
    run.log.1 ... the previous ones."""

    def __init__(self, filename, backupCount=7, encoding='utf-8'):
        os.makedirs(os.path.dirname(filename) or '.', exist_ok=True)
        rollover = os.path.exists(filename) and os.path.getsize(filename) > 0
        super().__init__(filename, backupCount=backupCount, encoding=encoding)
        if rollover:
            self.doRollover()


def parse_args(argv):
    parser = argparse.ArgumentParser(description='Lower bounds for Neumann p-Laplacian eigenvalues on cusp domains.')
    parser.add_argument('--cmd', required=True,
                        help='bound, classical, verify-constants, eig, capacity or sweep')
    parser.add_argument('--config', required=True, help='flat key = value input file')
    parser.add_argument('--out', help=f'report path, {paths.OUT_DIR}<cmd>.<format> by default')
    parser.add_argument('--format', choices=('json', 'csv'))
    parser.add_argument('--seed', type=int, default=0)

    # finite element overrides of the config
    parser.add_argument('--h', type=float)
    parser.add_argument('--grading-levels', type=int, dest='grading_levels')
    parser.add_argument('--p', type=float)
    parser.add_argument('--restarts', type=int)

    parser.add_argument('debug', nargs='?', choices=('debug',), help='log the library at DEBUG level')
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(sys.argv[1:] if argv is None else argv)
    debug_instance = args.debug == 'debug'

    # Setup the root logger
    rlog = logging.getLogger()
    rlog.setLevel(logging.INFO)
    handler = RunLogHandler(paths.RUN_LOG)
    handler.setFormatter(logging.Formatter('{asctime}:{levelname}:{name}:{message}', style='{'))
    rlog.addHandler(handler)

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.WARNING)
    console.setFormatter(logging.Formatter('{levelname}: {message}', style='{'))
    rlog.addHandler(console)
    logging.captureWarnings(True)

    # Setup the library and tasks loggers
    if debug_instance:
        logging.getLogger('cuspbound').setLevel(logging.DEBUG)
        logging.getLogger('tasks').setLevel(logging.DEBUG)

    log = logging.getLogger(__name__)
    log.info('Started with Python {0.major}.{0.minor}.{0.micro}'.format(sys.version_info))

    overrides = {'h': args.h, 'grading_levels': args.grading_levels, 'p': args.p, 'restarts': args.restarts}
    run_config = RunConfig(command=args.cmd, input=args.config, output=args.out, format=args.format,
                           seed=args.seed, overrides=overrides)

    runner = Runner(run_config, debug_instance=debug_instance)
    try:
        log.info(f'Running {args.cmd} on {args.config}...')
        runner.run()
    finally:
        logging.shutdown()
    return runner.exit_code


if __name__ == '__main__':
    sys.exit(main())
