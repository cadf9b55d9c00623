import pytest

from utils.config import REQUIRED, Config, ConfigError


def write(tmp_path, text, name='input.conf'):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


@pytest.fixture
def conf(tmp_path):
    return Config(write(tmp_path, '''
# cusp exponents
gammas = 1, 1
p = 2          # trailing comment
profiles = 1, 1 ; 3
refine = off
variant = paper-simplified
h = small
'''))


class TestParse:
    def test_values(self, conf):
        assert len(conf) == 6
        assert 'gammas' in conf
        assert conf.get_floats('gammas') == (1.0, 1.0)
        assert conf.get_float('p') == 2.0
        assert conf.get_int('p') == 2
        assert conf.p == '2'
        assert conf.missing is None

    def test_lines(self, conf):
        assert conf.line('gammas') == 3
        assert conf.line('p') == 4

    def test_malformed_line(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            Config(write(tmp_path, 'p = 2\njust words\n'))
        assert info.value.line == 2

    def test_duplicate_key(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            Config(write(tmp_path, 'p = 2\n\np = 3\n'))
        assert info.value.key == 'p'
        assert info.value.line == 3
        assert str(info.value) == 'line 3: p: Duplicate key.'

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            Config(str(tmp_path / 'nowhere.conf'))


class TestGetters:
    def test_required(self, conf):
        with pytest.raises(ConfigError) as info:
            conf.get_float('q', REQUIRED)
        assert info.value.key == 'q'
        assert conf.get_float('q', 1.5) == 1.5

    def test_wrong_type_names_the_line(self, conf):
        with pytest.raises(ConfigError) as info:
            conf.get_float('h')
        assert info.value.line == 8
        assert 'small' in str(info.value)

    def test_bool(self, conf):
        assert conf.get_bool('refine') is False
        with pytest.raises(ConfigError):
            conf.get_bool('h')

    def test_groups(self, conf):
        assert conf.get_groups('profiles') == ((1.0, 1.0), (3.0,))
        assert conf.get_groups('gammas') == ((1.0, 1.0),)

    def test_empty_list_item(self, tmp_path):
        conf = Config(write(tmp_path, 'p = 1.5,,2\n'))
        with pytest.raises(ConfigError):
            conf.get_floats('p')

    def test_choice(self, conf):
        assert conf.get_choice('variant', ('corrected', 'paper-simplified')) == 'paper-simplified'
        assert conf.get_choice('domain', ('cusp', 'square'), 'cusp') == 'cusp'
        with pytest.raises(ConfigError):
            conf.get_choice('h', ('big',))

    def test_require(self, conf):
        conf.require('gammas', 'p')
        with pytest.raises(ConfigError):
            conf.require('gammas', 'q')


class TestSave:
    def test_round_trip(self, tmp_path):
        path = str(tmp_path / 'saved.conf')
        Config.from_mapping({'profiles': [[1.0, 1.0], [3.0]], 'p': 0.1, 'domain': 'cusp', 'levels': 40},
                            file=path).save()

        loaded = Config(path)
        assert loaded.get_groups('profiles') == ((1.0, 1.0), (3.0,))
        assert loaded.get_float('p') == 0.1
        assert loaded.get_int('levels') == 40
        assert loaded.domain == 'cusp'
        assert not (tmp_path / 'saved.conf~').exists()

    def test_set(self, conf):
        conf.p = 1 / 3
        assert conf.get_float('p') == 1 / 3
        assert conf.line('p') is None
        assert conf.to_mapping()['gammas'] == '1, 1'
