import importlib
import logging
import os
import re
import time
import traceback
from dataclasses import dataclass

import paths
from cuspbound import reports
from cuspbound.errors import DomainError, NumericalError
from utils import utils
from utils.config import Config, ConfigError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    command: str
    input: str
    output: str = None
    format: str = None
    seed: int = 0
    overrides: dict = None


class Runner:
    def __init__(self, run_config, tasks_path=paths.TASKS_DIR, debug_instance=False, workers=None):
        self.run_config = run_config
        self.debug_instance = debug_instance
        self.tasks = {}
        self.exit_code = EXIT_OK
        self.message = None
        self.start_time = time.time()
        self.workers = workers
        self.load_extensions(tasks_path)

    def add_task(self, task):
        self.tasks[task.name] = task

    def load_extensions(self, path):
        # Load all the tasks we find in the given path, its parent being importable
        package = os.path.basename(os.path.normpath(path))
        for entry in sorted(os.scandir(path), key=lambda e: e.name):
            if entry.is_file():
                # Let's construct the module name from the file name
                tokens = re.findall(r'\w+', entry.name)
                if tokens[-1] != 'py' or tokens[0].startswith('_'):
                    continue
                extension = f'{package}.{tokens[0]}'

                try:
                    module = importlib.import_module(extension)
                    module.setup(self)
                except Exception as e:
                    log.warning(f'Failed to load extension {extension}\n{type(e)}: {e}')

    def mapper(self):
        return utils.OrderedMap(self.workers if self.workers is not None else utils.worker_count())

    def validate(self):
        """Load the config and let the task check it, before any computation."""
        rc = self.run_config
        task = self.tasks.get(rc.command)
        if task is None:
            raise ConfigError(f'Unknown command "{rc.command}", expected one of {", ".join(sorted(self.tasks))}.')

        fmt = rc.format or task.formats[0]
        if fmt not in task.formats:
            raise ConfigError(f'{rc.command} writes {" or ".join(task.formats)}, not {fmt}.', 'format')

        conf = Config(rc.input)
        for key, value in (rc.overrides or {}).items():
            if value is not None:
                conf.set(key, value)
        params = task.validate(conf)
        output = rc.output or f'{paths.OUT_DIR}{rc.command}.{fmt}'
        return task, conf, params, fmt, output

    def on_task_error(self, error):
        """Exit code and message for an error raised while running a task."""
        if isinstance(error, (ConfigError, DomainError)):
            return EXIT_CONFIG, f'Invalid configuration: {error}'
        if isinstance(error, NumericalError):
            return EXIT_NUMERICAL, f'Numerical failure ({type(error).__name__}): {error}'

        tb = ''.join(traceback.format_exception(type(error), error, error.__traceback__))
        log.error(f'Ignoring exception in command {self.run_config.command} : {tb}')
        return EXIT_UNEXPECTED, 'An unexpected error has occurred and has been logged.'

    def summary(self, mapper, fmt, output):
        rc = self.run_config
        entries = [('command', rc.command), ('input', rc.input), ('output', output), ('format', fmt),
                   ('seed', rc.seed), ('workers', mapper.workers)]
        return utils.indented_entry_to_str(entries, indent=2, sep=' : ')

    def run(self):
        rc = self.run_config
        try:
            task, conf, params, fmt, output = self.validate()
            mapper = self.mapper()
            log.info(f'Running\n{self.summary(mapper, fmt, output)}')
            result = task.run(params, seed=rc.seed, mapper=mapper)
            head = reports.header(rc.command, rc.seed, conf.to_mapping())
            reports.write_report(output, fmt, head, result)
        except Exception as e:
            self.exit_code, message = self.on_task_error(e)
            log.error(message)
            self.message = message
        else:
            self.exit_code = EXIT_OK
            self.message = f'{rc.command} done in {utils.duration_to_str(time.time() - self.start_time)}'
            log.info(self.message)
        return self.exit_code
