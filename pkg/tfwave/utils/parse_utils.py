"""Parsing helpers for exponents, norm specifications, symbols and command-line extras"""
import logging
import re

from .constants import INF
from .errors import ConfigError
from .tfnorms import AmalgamSpec, ModulationSpec
from .multipliers import Symbol, klein_gordon_symbols

logger = logging.getLogger(__name__)

_INFINITY_WORDS = {'inf', 'infinity', '+inf', 'oo'}
_MODULATION_KEYS = ('p', 'q', 's')
_AMALGAM_KEYS = ('q', 's', 'p', 'gamma')


def parse_exponent(text):
    """'inf' or a number; range checks happen where the exponent is used"""
    if isinstance(text, (int, float)):
        return float(text)
    value = str(text).strip().lower()
    if value in _INFINITY_WORDS:
        return INF
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"Invalid exponent: {text}")


def format_exponent(p):
    return 'inf' if p == INF else repr(float(p))


def parse_bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ('1', 'true', 'yes', 'on'):
        return True
    if value in ('0', 'false', 'no', 'off'):
        return False
    raise ConfigError(f"Invalid boolean: {text}")


def _spec_fields(body, names):
    parts = [part.strip() for part in body.split(',') if part.strip()]
    if parts and all('=' not in part for part in parts):
        if len(parts) != len(names):
            raise ConfigError(f"Expected {len(names)} values ({', '.join(names)}), got '{body}'")
        return dict(zip(names, parts))
    fields = {}
    for part in parts:
        key, sep, value = part.partition('=')
        key = key.strip()
        if not sep or key not in names:
            raise ConfigError(f"Unknown field '{part}' (allowed: {', '.join(names)})")
        fields[key] = value.strip()
    return fields


def parse_norm_spec(text):
    """'mod:p=2,q=1,s=0', 'mod:2,1,0', 'am:q=1,s=0,p=2,gamma=0' or 'am:1,0,2,0'"""
    prefix, sep, body = str(text).strip().partition(':')
    prefix = prefix.lower()
    if not sep:
        raise ConfigError(f"Norm specification needs a 'mod:' or 'am:' prefix: {text}")
    if prefix in ('mod', 'm', 'modulation'):
        fields = _spec_fields(body, _MODULATION_KEYS)
        return ModulationSpec(parse_exponent(fields.get('p', 2)), parse_exponent(fields.get('q', 2)),
                              float(fields.get('s', 0)))
    if prefix in ('am', 'w', 'amalgam'):
        fields = _spec_fields(body, _AMALGAM_KEYS)
        return AmalgamSpec(parse_exponent(fields.get('q', 1)), float(fields.get('s', 0)),
                           parse_exponent(fields.get('p', 2)), float(fields.get('gamma', 0)))
    raise ConfigError(f"Unknown norm kind '{prefix}' in {text}")


def format_norm_spec(spec):
    if isinstance(spec, ModulationSpec):
        return f"mod:p={format_exponent(spec.p)},q={format_exponent(spec.q)},s={spec.s!r}"
    return f"am:q={format_exponent(spec.q)},s={spec.s!r},p={format_exponent(spec.p)},gamma={spec.gamma!r}"


def parse_symbol(text):
    """'sinpow:alpha:delta', 'cos', 'wavecos:t', 'wavesinc:t', 'kgcos:t', 'kgsinc:t' or 'one'"""
    parts = [part.strip() for part in str(text).strip().lower().split(':')]
    name, args = parts[0], parts[1:]
    try:
        values = [float(a) for a in args]
    except ValueError:
        raise ConfigError(f"Invalid symbol parameters: {text}")
    arity = {'sinpow': 2, 'cos': 0, 'one': 0, 'wavecos': 1, 'wavesinc': 1, 'kgcos': 1, 'kgsinc': 1}
    if name not in arity:
        raise ConfigError(f"Unknown symbol: {text}")
    if len(values) != arity[name]:
        raise ConfigError(f"Symbol {name} takes {arity[name]} parameters, got {len(values)}")
    if name == 'sinpow':
        return Symbol.sinpow(*values)
    if name == 'cos':
        return Symbol.cos()
    if name == 'one':
        return Symbol.one()
    if name == 'wavecos':
        return Symbol.wave_cos(values[0])
    if name == 'wavesinc':
        return Symbol.wave_sinc(values[0])
    cos_part, sinc_part = klein_gordon_symbols(values[0])
    return cos_part if name == 'kgcos' else sinc_part


def parse_int_list(text):
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        return [int(v) for v in re.split(r'[,\s]+', str(text).strip()) if v]
    except ValueError:
        raise ConfigError(f"Invalid integer list: {text}")


def parse_extra_args(args):
    """['--N', '3', '--bisect', '--T=0.5'] -> {'N': '3', 'bisect': True, 'T': '0.5'}"""
    params = {}
    i = 0
    while i < len(args):
        token = args[i]
        if not token.startswith('--') or len(token) == 2:
            raise ConfigError(f"Unexpected argument: {token}")
        key, sep, value = token[2:].partition('=')
        key = key.replace('-', '_')
        if sep:
            params[key] = value
        elif i + 1 < len(args) and not args[i + 1].startswith('--'):
            params[key] = args[i + 1]
            i += 1
        else:
            params[key] = True
        i += 1
    return params
