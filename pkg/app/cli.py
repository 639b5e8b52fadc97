"""
Command-line front end: `sopcalc sweep | compare | derive | presets`.

Settings resolve as built-in defaults < config.py (Config_is) < --preset <
--config file < explicit flags.
"""
import functools
import logging
import sys
from pathlib import Path

import click

from app import configure_logging
from app.models import Axis, Method, SystemConfig
from app.services.config_file import apply_system_fields, load_config_file, parse_values
from app.services.custom_errors import ComparisonFailed, CustomError, ValidationError
from app.services.params_service import ParamsService
from app.services.sweep_service import SweepService
from config import Config_is
from constants import CHANNELS, COMPARE_HEADER, GAIN_HEADER, PRESETS

logger = logging.getLogger(__name__)


def _settings():
    return {key: getattr(Config_is, key) for key in dir(Config_is) if key.startswith('SOP_')}


def handle_errors(command):
    """Print `error: <message>` and exit with the error's code"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CustomError as e:
            logger.error(e.message)
            click.echo(f"error: {e.message}", err=True)
            sys.exit(e.exit_code)
    return wrapper


def _parse_mean_power(values):
    fields = {}
    for item in values:
        channel, sep, db = item.partition('=')
        channel = channel.strip().lower()
        if not sep or channel not in CHANNELS:
            raise ValidationError(f"--mean-power expects CH=DB with CH in {', '.join(CHANNELS)}, got {item!r}")
        try:
            fields[f"mean_power_{channel}_db"] = float(db)
        except ValueError:
            raise ValidationError(f"--mean-power value for {channel} is not a number: {db!r}")
    return fields


def system_options(command):
    options = [
        click.option('--config', 'config_path', type=click.Path(dir_okay=False), help='key = value config file'),
        click.option('--n-transmitters', '-N', type=int, help='number of secondary transmitters'),
        click.option('--s', 'backhaul_prob', type=float, help='backhaul activity probability'),
        click.option('--phi', 'primary_outage_threshold', type=float, help='primary outage threshold'),
        click.option('--beta', 'primary_rate_threshold', type=float, help='primary rate threshold (bit/s/Hz)'),
        click.option('--r-th', 'secrecy_rate_threshold', type=float, help='secrecy rate threshold (bit/s/Hz)'),
        click.option('--gamma-t-db', type=float, help='primary transmit SNR in dB'),
        click.option('--mean-power', multiple=True, metavar='CH=DB', help='mean channel power gain in dB'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def sweep_options(command):
    options = [
        click.option('--preset', type=click.Choice(sorted(PRESETS)), help='figure reproduction preset'),
        click.option('--axis', type=click.Choice([a.value for a in Axis]), help='swept parameter'),
        click.option('--values', 'values_text', help='comma list or start:stop:step'),
        click.option('--scheme', 'schemes', multiple=True, help='sts_known, ots_known, sts_blind, ots_blind'),
        click.option('--method', 'methods', multiple=True, help='analytic, asymptotic, mc'),
        click.option('--trials', type=int, help='Monte Carlo trials per point'),
        click.option('--seed', type=int, help='Monte Carlo seed'),
        click.option('--workers', type=int, help='parallel worker processes'),
        click.option('--rel-tol', type=float, help='OTS quadrature relative tolerance'),
        click.option('--out', type=click.Path(dir_okay=False), help='output CSV (stdout when omitted)'),
    ]
    for option in reversed(options):
        command = option(command)
    return system_options(command)


def _flag_fields(kwargs):
    fields = {key: kwargs[key] for key in ('n_transmitters', 'backhaul_prob', 'primary_outage_threshold',
                                           'primary_rate_threshold', 'secrecy_rate_threshold', 'gamma_t_db')
              if kwargs.get(key) is not None}
    fields.update(_parse_mean_power(kwargs.get('mean_power') or ()))
    return fields


def resolve(kwargs):
    """
    (SystemConfig, sweep fields) after layering preset, config file and flags
    over SystemConfig.evaluation_profile().
    """
    config = SystemConfig.evaluation_profile()
    preset = kwargs.get('preset')
    if preset:
        _, _, fixed = SweepService.preset(preset)
        config = config.with_overrides(**fixed)

    sweep = {}
    if kwargs.get('config_path'):
        system, sweep = load_config_file(kwargs['config_path'])
        config = apply_system_fields(config, system)
    config = apply_system_fields(config, _flag_fields(kwargs))

    flags = {
        'axis': kwargs.get('axis'),
        'values': parse_values(kwargs['values_text']) if kwargs.get('values_text') else None,
        'schemes': list(kwargs['schemes']) if kwargs.get('schemes') else None,
        'methods': list(kwargs['methods']) if kwargs.get('methods') else None,
        'trials': kwargs.get('trials'),
        'seed': kwargs.get('seed'),
        'workers': kwargs.get('workers'),
        'rel_tol': kwargs.get('rel_tol'),
    }
    sweep.update({key: value for key, value in flags.items() if value is not None})
    return config, sweep


def _emit(text, out):
    if out is None:
        click.echo(text, nl=False)
        return None
    return SweepService.write_atomic(out, text)


def _suffixed(path, suffix):
    path = Path(path)
    return path.with_name(f"{path.stem}_{suffix}{path.suffix or '.csv'}")


@click.group(name='sopcalc')
@click.option('--log-level', default=None, help='DEBUG, INFO, WARNING or ERROR')
@click.option('--quiet', '-q', is_flag=True, help='log to the log file only')
def cli(log_level, quiet):
    """Secrecy outage probability of backhaul-limited cognitive small cells."""
    configure_logging(level=log_level, stream=not quiet)


@cli.command()
@sweep_options
@click.option('--emit-gnuplot', is_flag=True, help='write a gnuplot script beside the CSV')
@click.option('--gain-out', type=click.Path(dir_okay=False), help='CSV of blind minus known Monte Carlo SOP')
@handle_errors
def sweep(emit_gnuplot, gain_out, **kwargs):
    """Run a parameter sweep and write the SOP table."""
    settings = _settings()
    config, fields = resolve(kwargs)
    preset = kwargs.get('preset')
    out = kwargs.get('out')
    if emit_gnuplot and out is None and not preset:
        raise ValidationError("--emit-gnuplot needs --out")

    if preset:
        if fields.get('axis', Axis.GAMMA_T_DB.value) != Axis.GAMMA_T_DB.value:
            raise ValidationError(f"preset {preset} sweeps gamma_t_db; --axis {fields['axis']} conflicts")
        base_spec = SweepService.build_spec(config, fields, settings)
        extra = {'axis_values': fields['values']} if 'values' in fields else {}
        base = out or f"{preset}.csv"
        runs = [(suffix, _suffixed(base, suffix), spec) for suffix, spec in SweepService.preset_specs(
            preset, config, base_spec.schemes, base_spec.methods, base_spec.trials, base_spec.seed,
            base_spec.rel_tol, base_spec.workers, quad_budget=base_spec.quad_budget, **extra)]
    else:
        base = out
        runs = [(None, out, SweepService.build_spec(config, fields, settings))]

    # every run is evaluated before anything is written
    results = [(suffix, path, spec, SweepService.run_sweep(spec, block_size=settings['SOP_BLOCK_SIZE']))
               for suffix, path, spec in runs]
    for suffix, path, spec, rows in results:
        written = _emit(SweepService.to_csv(rows), path)
        if written:
            logger.info(f"Wrote {len(rows)} rows to {written}")
        if gain_out:
            target = _suffixed(gain_out, suffix) if suffix else gain_out
            SweepService.write_atomic(target, SweepService.to_csv(SweepService.knowledge_gain(rows), GAIN_HEADER))
    if emit_gnuplot:
        script = Path(base).with_suffix('.gp')
        SweepService.write_atomic(script, SweepService.gnuplot_script(results[0][2], [r[1] for r in results]))
        logger.info(f"Wrote gnuplot script {script}")


@cli.command()
@sweep_options
@handle_errors
def compare(**kwargs):
    """Check analytic values against Monte Carlo at one configuration."""
    settings = _settings()
    if kwargs.get('preset'):
        raise ValidationError("compare runs at a single configuration; presets are for sweep")
    config, fields = resolve(kwargs)
    fields.setdefault('methods', [Method.ANALYTIC.value, Method.MC.value])
    spec = SweepService.build_spec(config, fields, settings)
    report = SweepService.compare_report(spec, block_size=settings['SOP_BLOCK_SIZE'])
    _emit(SweepService.to_csv(report, COMPARE_HEADER), kwargs.get('out'))
    try:
        SweepService.ensure_passed(report)
    except ComparisonFailed:
        logger.error("Compare report failed")
        raise


@cli.command()
@system_options
@handle_errors
def derive(**kwargs):
    """Print the derived linear-scale parameters as key=value lines."""
    config, fields = resolve(kwargs)
    derived = ParamsService.derive(config)
    values = dict(derived.to_dict())
    values['xi_asymptotic'] = ParamsService.xi_asymptotic(config)
    values['primary_outage'] = ParamsService.primary_outage(config)
    values['silenced'] = derived.silenced
    for key, value in values.items():
        click.echo(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")


@cli.command()
def presets():
    """List the figure reproduction presets."""
    for name, (field, series, fixed) in sorted(PRESETS.items()):
        fixed_text = ', '.join(f"{k}={v}" for k, v in fixed.items())
        click.echo(f"{name}: gamma_t_db 0..60 dB, {field} in {list(series)}; {fixed_text}")


if __name__ == '__main__':
    cli()
