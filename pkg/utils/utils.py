"""
Helpers shared by the runner and the tasks.
"""
import concurrent.futures
import logging
import os

import psutil

from utils.config import ConfigError

log = logging.getLogger(__name__)


def duration_to_str(duration):
    # Extract minutes, hours and days
    minutes, seconds = divmod(int(duration), 60)
    hours, minutes = divmod(minutes, 60)
    days, hours = divmod(hours, 24)

    # Create a fancy string
    return f"{f'{days} days, ' if days > 0 else ''}{f'{hours} hours, ' if hours > 0 else ''}{f'{minutes} minutes, ' if minutes > 0 else ''}{seconds} seconds"


def indented_entry_to_str(entries, indent=0, sep=' '):
    """Pretty formatting."""
    # Get the longest keys' width
    width = max([len(t[0]) for t in entries])

    output = []
    for name, entry in entries:
        if indent > 0:
            output.append(f'{"":{indent}}{name:{width}}{sep}{entry}')
        else:
            output.append(f'{name:{width}}{sep}{entry}')

    return '\n'.join(output)


def worker_count(environ=os.environ):
    """Workers allowed by NB_THREADS: unset means serial, 0 means one per physical core."""
    value = environ.get('NB_THREADS', '').strip()
    if not value:
        return 1
    try:
        count = int(value)
    except ValueError:
        raise ConfigError(f'Expected an integer, got "{value}".', 'NB_THREADS')
    if count < 0:
        raise ConfigError(f'Expected a count >= 0, got {count}.', 'NB_THREADS')
    if count == 0:
        count = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return count


class OrderedMap:
    """map() over a thread pool, results in input order."""

    def __init__(self, workers=1):
        self.workers = workers

    def __call__(self, func, iterable):
        items = list(iterable)
        if self.workers <= 1 or len(items) <= 1:
            return list(map(func, items))

        with concurrent.futures.ThreadPoolExecutor(max_workers=min(self.workers, len(items))) as executor:
            return list(executor.map(func, items))
