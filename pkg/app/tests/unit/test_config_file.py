import pytest

from app.models import SystemConfig
from app.services.config_file import apply_system_fields, load_config_file, parse_mapping, parse_values
from app.services.custom_errors import ConfigFileError, ValidationError

EXAMPLE = """
# two transmitters, weak backhaul
N = 2
s = 0.5          # trailing comment
PHI = 0.05
mean_power_te_db = 3
axis = gamma_t_db
values = 0:10:2.5
schemes = sts_known, ots_blind
methods = mc
trials = 1e4
"""


def test_load_config_file(tmp_path):
    """
    GIVEN a key = value file with comments, aliases and a range
    WHEN it is loaded and applied to the evaluation profile
    THEN system and sweep fields carry the parsed values
    """
    path = tmp_path / 'run.cfg'
    path.write_text(EXAMPLE)
    system, sweep = load_config_file(path)
    assert system == {'n_transmitters': 2, 'backhaul_prob': 0.5, 'primary_outage_threshold': 0.05,
                      'mean_power_te_db': 3.0}
    assert sweep['values'] == [0.0, 2.5, 5.0, 7.5, 10.0]
    assert sweep['schemes'] == ['sts_known', 'ots_blind']
    assert sweep['trials'] == 10000

    config = apply_system_fields(SystemConfig.evaluation_profile(), system)
    assert config.n_transmitters == 2
    assert config.mean_power('te') == 3.0
    assert config.mean_power('td') == -6.0


@pytest.mark.parametrize('line, key', [
    ('colour = blue', 'colour'),
    ('N = 2.5', 'n'),
    ('s = high', 's'),
    ('values = 10:0:1', 'values'),
])
def test_bad_lines_name_file_line_and_key(tmp_path, line, key):
    path = tmp_path / 'bad.cfg'
    path.write_text(f"# header\n{line}\n")
    with pytest.raises(ConfigFileError) as info:
        load_config_file(path)
    assert info.value.payload['line'] == 2
    assert info.value.payload['key'] == key
    assert f"{path}:2" in info.value.message
    assert info.value.exit_code == 1


def test_missing_separator_and_missing_file(tmp_path):
    path = tmp_path / 'bad.cfg'
    path.write_text("N 2\n")
    with pytest.raises(ConfigFileError):
        load_config_file(path)
    with pytest.raises(ConfigFileError):
        load_config_file(tmp_path / 'absent.cfg')


def test_parse_values():
    assert parse_values('10, 20,30') == [10.0, 20.0, 30.0]
    assert parse_values('0:60:2')[-1] == 60.0
    assert len(parse_values('0:60:2')) == 31
    assert parse_values('0.1:0.3:0.1') == [0.1, 0.2, 0.3]
    with pytest.raises(ValidationError):
        parse_values('1:2')


def test_parse_mapping_accepts_lists():
    system, sweep = parse_mapping({'N': 3, 'values': [10, 20], 'schemes': ['sts_known'], 'seed': 4})
    assert system == {'n_transmitters': 3}
    assert sweep == {'values': [10.0, 20.0], 'schemes': ['sts_known'], 'seed': 4}
    with pytest.raises(ValidationError):
        parse_mapping({'unknown': 1})


def test_dotenv_syntax_and_line_numbers(tmp_path):
    """
    GIVEN a run file with quoted values, an export prefix and blank lines
    WHEN it is loaded
    THEN quotes and the prefix are dropped and errors still name the key's own line
    """
    path = tmp_path / 'run.cfg'
    path.write_text('export N=3\nschemes = "sts_known, ots_known"\nvalues = \'10, 20\'\n')
    system, sweep = load_config_file(path)
    assert system == {'n_transmitters': 3}
    assert sweep == {'schemes': ['sts_known', 'ots_known'], 'values': [10.0, 20.0]}

    path.write_text("N = 2\n\n\n# comment\n\ncolour = blue\n")
    with pytest.raises(ConfigFileError) as info:
        load_config_file(path)
    assert info.value.payload['line'] == 6
    assert info.value.payload['key'] == 'colour'


@pytest.mark.parametrize('text', ['10,abc', '10:x:2', ','])
def test_parse_values_rejects_non_numbers(text):
    with pytest.raises(ValidationError):
        parse_values(text)
