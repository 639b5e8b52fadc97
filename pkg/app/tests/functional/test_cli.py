import csv
import io

import pytest

from app.cli import cli
from constants import COMPARE_HEADER, CSV_HEADER, GAIN_HEADER


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_to_stdout(cli_runner):
    """
    GIVEN an analytic sweep over three Gamma_T values
    WHEN `sweep` runs without --out
    THEN stdout holds the exact header and three rows with empty Monte Carlo columns
    """
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--values', '10,20,30', '--scheme', 'sts_known',
                                     '--method', 'analytic'])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == ','.join(CSV_HEADER)
    rows = _rows(result.output)
    assert [row['axis_value'] for row in rows] == ['10', '20', '30']
    for row in rows:
        assert 0.0 < float(row['sop']) < 1.0
        assert row['std_error'] == ''
        assert row['trials'] == ''


def test_blind_analytic_exits_with_validation_code(cli_runner):
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--scheme', 'sts_blind', '--method', 'analytic'])
    assert result.exit_code == 1
    assert 'error:' in result.output


@pytest.mark.parametrize('values', ['10,abc', '10:x:2'])
def test_non_numeric_values_exit_with_validation_code(cli_runner, values):
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--values', values, '--method', 'analytic'])
    assert result.exit_code == 1
    assert 'error:' in result.output
    assert not isinstance(result.exception, ValueError)


def test_zero_backhaul_axis(cli_runner):
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--axis', 's', '--values', '0', '--method', 'analytic'])
    assert result.exit_code == 0, result.output
    assert [float(row['sop']) for row in _rows(result.output)] == [1.0, 1.0]


def test_compare_passes(cli_runner, tmp_path):
    """
    GIVEN the evaluation profile at 30 dB with 400 000 trials
    WHEN `compare` runs
    THEN every row passes and the exit code is 0
    """
    out = tmp_path / 'compare.csv'
    result = cli_runner.invoke(cli, ['-q', 'compare', '--trials', '400000', '--seed', '11', '--out', str(out)])
    assert result.exit_code == 0, result.output
    text = out.read_text()
    assert text.splitlines()[0] == ','.join(COMPARE_HEADER)
    assert all(row['pass'] == 'true' for row in _rows(text))


def test_compare_with_few_trials_reports(cli_runner, tmp_path):
    out = tmp_path / 'compare.csv'
    result = cli_runner.invoke(cli, ['-q', 'compare', '--trials', '10', '--out', str(out)])
    assert result.exit_code in (0, 3)
    assert len(_rows(out.read_text())) == 2


def test_compare_rejects_presets(cli_runner):
    result = cli_runner.invoke(cli, ['-q', 'compare', '--preset', 'fig2'])
    assert result.exit_code == 1


def test_config_file_with_flag_override(cli_runner, tmp_path):
    """
    GIVEN a config file setting N, s and the sweep values
    WHEN `sweep` runs with the file and an explicit --s flag
    THEN the flag wins over the file
    """
    config = tmp_path / 'run.cfg'
    config.write_text("N = 2\ns = 0.0\naxis = gamma_t_db\nvalues = 20, 40\nmethods = analytic\n"
                      "schemes = sts_known\n")
    from_file = cli_runner.invoke(cli, ['-q', 'sweep', '--config', str(config)])
    overridden = cli_runner.invoke(cli, ['-q', 'sweep', '--config', str(config), '--s', '0.9'])
    assert from_file.exit_code == 0 and overridden.exit_code == 0
    assert [float(row['sop']) for row in _rows(from_file.output)] == [1.0, 1.0]
    assert all(float(row['sop']) < 1.0 for row in _rows(overridden.output))


def test_bad_config_file_names_line(cli_runner, tmp_path):
    config = tmp_path / 'bad.cfg'
    config.write_text("N = 2\ncolour = blue\n")
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--config', str(config)])
    assert result.exit_code == 1
    assert f"{config}:2" in result.output


def test_derive_prints_key_values(cli_runner):
    result = cli_runner.invoke(cli, ['-q', 'derive', '--phi', '0.05', '--mean-power', 'te=3'])
    assert result.exit_code == 0, result.output
    values = dict(line.split('=', 1) for line in result.output.splitlines())
    assert float(values['primary_outage']) == pytest.approx(0.05, rel=1e-12)
    assert float(values['lambda_te']) == pytest.approx(10 ** -0.3)
    assert values['silenced'] == 'False'


def test_bad_mean_power_flag(cli_runner):
    result = cli_runner.invoke(cli, ['-q', 'derive', '--mean-power', 'xx=3'])
    assert result.exit_code == 1


def test_presets_listing(cli_runner):
    result = cli_runner.invoke(cli, ['presets'])
    assert result.exit_code == 0
    assert [line.split(':')[0] for line in result.output.splitlines()] == ['fig2', 'fig3', 'fig4']


def test_preset_writes_one_csv_per_series(cli_runner, tmp_path):
    """
    GIVEN the fig2 preset over two Gamma_T values
    WHEN `sweep` runs with --out and --emit-gnuplot
    THEN one CSV per backhaul probability and a gnuplot script are written
    """
    out = tmp_path / 'plots' / 'fig2.csv'
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--preset', 'fig2', '--values', '30,60',
                                     '--method', 'analytic', '--out', str(out), '--emit-gnuplot'])
    assert result.exit_code == 0, result.output
    for name in ('fig2_s-0.5.csv', 'fig2_s-0.99.csv'):
        rows = _rows((tmp_path / 'plots' / name).read_text())
        assert len(rows) == 4
        assert {row['scheme'] for row in rows} == {'sts_known', 'ots_known'}
    script = (tmp_path / 'plots' / 'fig2.gp').read_text()
    assert 'fig2_s-0.5.csv' in script and 'fig2_s-0.99.csv' in script


def test_preset_rejects_other_axis(cli_runner):
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--preset', 'fig3', '--axis', 's'])
    assert result.exit_code == 1


def test_gnuplot_needs_out(cli_runner):
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--method', 'analytic', '--emit-gnuplot'])
    assert result.exit_code == 1


def test_gain_output(cli_runner, tmp_path):
    """
    GIVEN known and blind schemes simulated at s = 0.5
    WHEN `sweep` runs with --gain-out
    THEN the gain table holds blind minus known SOP per base scheme
    """
    out, gain = tmp_path / 'sop.csv', tmp_path / 'gain.csv'
    result = cli_runner.invoke(cli, ['-q', 'sweep', '--s', '0.5', '--method', 'mc', '--trials', '50000',
                                     '--scheme', 'sts_known', '--scheme', 'sts_blind',
                                     '--out', str(out), '--gain-out', str(gain)])
    assert result.exit_code == 0, result.output
    text = gain.read_text()
    assert text.splitlines()[0] == ','.join(GAIN_HEADER)
    rows = _rows(text)
    assert len(rows) == 1 and rows[0]['scheme'] == 'sts'
    assert float(rows[0]['gain']) > 0.3


def test_monte_carlo_csv_is_reproducible(cli_runner, tmp_path):
    args = ['-q', 'sweep', '--values', '10,30', '--method', 'mc', '--trials', '30000', '--seed', '7',
            '--workers', '2']
    first, second = tmp_path / 'a.csv', tmp_path / 'b.csv'
    assert cli_runner.invoke(cli, args + ['--out', str(first)]).exit_code == 0
    assert cli_runner.invoke(cli, args + ['--workers', '1', '--out', str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
