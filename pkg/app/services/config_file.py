import logging
import math
from pathlib import Path

from dotenv.parser import parse_stream

from app.services.custom_errors import ConfigFileError, ValidationError
from constants import CHANNELS

logger = logging.getLogger(__name__)

_SYSTEM_KEYS = {
    'n_transmitters': ('n_transmitters', int),
    'n': ('n_transmitters', int),
    'backhaul_prob': ('backhaul_prob', float),
    's': ('backhaul_prob', float),
    'phi': ('primary_outage_threshold', float),
    'primary_outage_threshold': ('primary_outage_threshold', float),
    'beta': ('primary_rate_threshold', float),
    'primary_rate_threshold': ('primary_rate_threshold', float),
    'r_th': ('secrecy_rate_threshold', float),
    'secrecy_rate_threshold': ('secrecy_rate_threshold', float),
    'gamma_t_db': ('gamma_t_db', float),
}
_SYSTEM_KEYS.update({f"mean_power_{c}_db": (f"mean_power_{c}_db", float) for c in CHANNELS})


def _number(token, text):
    try:
        return float(token)
    except ValueError:
        raise ValidationError(f"{token.strip()!r} in {text!r} is not a number")


def parse_values(text):
    """Comma list `0,10,20` or inclusive range `start:stop:step`"""
    text = str(text).strip()
    if ':' in text:
        parts = text.split(':')
        if len(parts) != 3:
            raise ValidationError(f"range must look like start:stop:step, got {text!r}")
        start, stop, step = (_number(p, text) for p in parts)
        if step <= 0 or stop < start:
            raise ValidationError(f"range {text!r} needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    values = [_number(v, text) for v in text.split(',') if v.strip()]
    if not values:
        raise ValidationError("values must not be empty")
    return values


def _split_list(text):
    return [v.strip() for v in str(text).split(',') if v.strip()]


_SWEEP_KEYS = {
    'axis': str,
    'values': parse_values,
    'schemes': _split_list,
    'methods': _split_list,
    'trials': int,
    'seed': int,
    'rel_tol': float,
    'workers': int,
    'quad_budget': int,
}


def _convert(kind, raw):
    if kind is int:
        number = float(raw)
        if number != int(number):
            raise ValueError(f"{raw!r} is not an integer")
        return int(number)
    return kind(raw)


def parse_mapping(mapping):
    """
    Same keys as the config file, from an already structured mapping (a JSON
    body). List values are accepted for values, schemes and methods.
    """
    system, sweep = {}, {}
    for key, raw in (mapping or {}).items():
        key = str(key).strip().lower()
        try:
            if key in _SYSTEM_KEYS:
                field, kind = _SYSTEM_KEYS[key]
                system[field] = _convert(kind, raw)
            elif key in _SWEEP_KEYS:
                if isinstance(raw, (list, tuple)):
                    sweep[key] = [float(v) for v in raw] if key == 'values' else [str(v) for v in raw]
                else:
                    sweep[key] = _convert(_SWEEP_KEYS[key], raw)
            else:
                raise ValidationError(f"unknown key {key!r}", payload={"key": key})
        except (TypeError, ValueError) as e:
            raise ValidationError(f"bad value for {key!r}: {e}", payload={"key": key})
    return system, sweep


def _line_of(binding):
    """1-based line of the binding's key; the parser's mark sits before leading blank lines"""
    text = binding.original.string
    return binding.original.line + text[:len(text) - len(text.lstrip())].count('\n')


def load_config_file(path):
    """
    Read a `key = value` file in dotenv syntax. Returns (system_fields,
    sweep_fields); system fields use SystemConfig names, mean powers appear as
    `mean_power_<ch>_db`.
    """
    path = Path(path)
    try:
        with path.open() as stream:
            bindings = list(parse_stream(stream))
    except OSError as e:
        raise ConfigFileError(f"cannot read config file: {e.strerror}", path=path)

    system, sweep = {}, {}
    for binding in bindings:
        number = _line_of(binding)
        if binding.error or (binding.key is not None and binding.value is None):
            content = binding.original.string.strip()
            raise ConfigFileError(f"expected key = value, got {content!r}", path=path, line=number)
        if binding.key is None:
            continue
        key, raw = binding.key.lower(), binding.value
        if key not in _SYSTEM_KEYS and key not in _SWEEP_KEYS:
            raise ConfigFileError(f"unknown key {key!r}", path=path, line=number, key=key)
        try:
            if key in _SYSTEM_KEYS:
                field, kind = _SYSTEM_KEYS[key]
                system[field] = _convert(kind, raw)
            else:
                sweep[key] = _convert(_SWEEP_KEYS[key], raw)
        except (ValueError, ValidationError) as e:
            raise ConfigFileError(f"bad value for {key!r}: {getattr(e, 'message', None) or e}",
                                  path=path, line=number, key=key)
    logger.debug(f"Loaded {path}: system={system} sweep={sweep}")
    return system, sweep


def apply_system_fields(config, fields):
    """New SystemConfig with the parsed fields substituted"""
    fields = dict(fields)
    powers = list(config.mean_power_db)
    for index, channel in enumerate(CHANNELS):
        key = f"mean_power_{channel}_db"
        if key in fields:
            powers[index] = fields.pop(key)
    return config.with_overrides(mean_power_db=tuple(powers), **fields)
