import os


class ConfigError(Exception):
    """A configuration value is missing or malformed."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        location = f'{f"line {line}: " if line else ""}{f"{key}: " if key else ""}'
        super().__init__(f'{location}{message}')


class Config:
    """The config object, created from a flat `key = value` file.

    `#` starts a comment, blank lines are ignored. Lists are comma separated, lists of lists use `;`
    between groups.
    """

    def __init__(self, file=None, encoding='utf-8', data=None):
        super().__setattr__('_data', {})
        super().__setattr__('_lines', {})
        self.file = file
        self.encoding = encoding

        if data is not None:
            for key, value in data.items():
                self.set(key, value)
        elif file is not None:
            try:
                with open(self.file, 'r', encoding=self.encoding) as fp:
                    self.parse(fp.read())
            except OSError as e:
                raise ConfigError(f'Cannot read {file}: {e.strerror}')

    def parse(self, text):
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition('=')
            key = key.strip()
            if not sep or not key:
                raise ConfigError(f'Expected "key = value", got "{raw.strip()}".', line=number)
            if key in self._data:
                raise ConfigError('Duplicate key.', key, number)
            self._data[key] = value.strip()
            self._lines[key] = number

    @classmethod
    def from_mapping(cls, mapping, file=None):
        return cls(file, data=mapping)

    def save(self):
        """Saves the config on disk."""
        tmp_file = self.file + '~'
        with open(tmp_file, 'w', encoding=self.encoding) as fp:
            fp.writelines(f'{key} = {value}\n' for key, value in self._data.items())
        os.replace(tmp_file, self.file)

    def set(self, key, value):
        self._data[key] = _format(value)
        self._lines.pop(key, None)

    def to_mapping(self):
        return dict(self._data)

    # utility

    def __contains__(self, item):
        return item in self._data

    def __len__(self):
        return len(self._data)

    def __iter__(self):
        return iter(self._data)

    def __getattr__(self, item):
        return self._data.get(item)

    def __setattr__(self, key, value):
        if key in self._data:
            self.set(key, value)
        else:
            super().__setattr__(key, value)

    def line(self, key):
        return self._lines.get(key)

    def error(self, key, message):
        return ConfigError(message, key, self.line(key))

    def require(self, *keys):
        for key in keys:
            if key not in self._data or self._data[key] == '':
                raise ConfigError('Missing required key.', key)

    def get(self, key, default=None):
        return self._data.get(key, default)

    def _convert(self, key, default, convert, kind):
        if key not in self._data:
            if default is REQUIRED:
                raise ConfigError('Missing required key.', key)
            return default
        try:
            return convert(self._data[key])
        except (TypeError, ValueError):
            raise self.error(key, f'Expected {kind}, got "{self._data[key]}".')

    def get_str(self, key, default=None):
        return self._convert(key, default, str, 'a string')

    def get_int(self, key, default=None):
        return self._convert(key, default, int, 'an integer')

    def get_float(self, key, default=None):
        return self._convert(key, default, float, 'a number')

    def get_bool(self, key, default=None):
        def convert(value):
            lowered = value.lower()
            if lowered in ('1', 'true', 'yes', 'on'):
                return True
            if lowered in ('0', 'false', 'no', 'off'):
                return False
            raise ValueError(value)

        return self._convert(key, default, convert, 'a boolean')

    def get_floats(self, key, default=None):
        return self._convert(key, default, lambda value: tuple(float(v) for v in _split(value, ',')),
                             'a comma separated list of numbers')

    def get_groups(self, key, default=None):
        """`;` separated groups of comma separated numbers."""
        return self._convert(key, default,
                             lambda value: tuple(tuple(float(v) for v in _split(group, ','))
                                                 for group in _split(value, ';')),
                             'groups of numbers separated by ";"')

    def get_choice(self, key, choices, default=None):
        value = self.get_str(key, default)
        if value not in choices:
            raise self.error(key, f'Expected one of {", ".join(choices)}, got "{value}".')
        return value


REQUIRED = object()


def _split(value, sep):
    parts = [part.strip() for part in value.split(sep)]
    if not all(parts):
        raise ValueError(value)
    return parts


def _format(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        if value and isinstance(value[0], (list, tuple)):
            return ' ; '.join(_format(group) for group in value)
        return ', '.join(_format(v) for v in value)
    return str(value)
