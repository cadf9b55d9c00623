"""
Report files. Every report carries the library version and an echo of its input, and nothing that
changes between runs, so identical inputs give byte-identical files.
"""
import csv
import io
import json
import logging
import os

from cuspbound import __version__

log = logging.getLogger(__name__)


def header(command, seed, echo):
    return {'version': __version__, 'command': command, 'seed': seed, 'input': dict(echo)}


def _atomic_write(path, text):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    tmp_file = path + '~'
    with open(tmp_file, 'w', encoding='utf-8', newline='') as fp:
        fp.write(text)
    os.replace(tmp_file, path)


def dumps_json(head, result):
    return json.dumps({**head, 'result': result}, indent=2, ensure_ascii=False) + '\n'


def dumps_csv(head, columns, rows, notes=()):
    """CSV text preceded by `#` comment lines: version, command, seed, input echo, column notes."""
    buffer = io.StringIO()
    buffer.write(f'# cuspbound {head["version"]} {head["command"]} seed={head["seed"]}\n')
    for key, value in head['input'].items():
        buffer.write(f'# {key} = {value}\n')
    for note in notes:
        buffer.write(f'# {note}\n')

    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ' '.join(_cell(v) for v in value)
    return str(value)


def write_report(path, fmt, head, result):
    """Write a JSON result, or a CSV one given as a dict with `columns`, `rows` and optional `notes`."""
    if fmt == 'json':
        text = dumps_json(head, result)
    else:
        text = dumps_csv(head, result['columns'], result['rows'], result.get('notes', ()))
    _atomic_write(path, text)
    log.info(f'Wrote {fmt} report to {path}')
