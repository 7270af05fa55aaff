"""Validation of experiment parameters"""
import re

from .constants import DEFAULT_GRIDS, INF, SUPPORTED_DIMENSIONS
from .parse_utils import parse_bool, parse_exponent, parse_int_list, parse_norm_spec, parse_symbol

# Validation patterns
PATTERNS = {
    'exponent': re.compile(r'^(inf|infinity|\+inf|oo|\d+(\.\d*)?([eE][-+]?\d+)?)$', re.IGNORECASE),
    'norm_spec': re.compile(r'^(mod|m|modulation|am|w|amalgam):[\w\s.,=+-]*$', re.IGNORECASE),
    'symbol': re.compile(r'^(sinpow:[-+\d.eE]+:[-+\d.eE]+|cos|one|(wavecos|wavesinc|kgcos|kgsinc):[-+\d.eE]+)$',
                         re.IGNORECASE),
    'int_list': re.compile(r'^\d+([,\s]+\d+)*$'),
}

# name -> (type, default); None defaults are filled from settings or left unset
COMMON_PARAMETERS = {
    'd': ('int', 1),
    'n': ('int', None),
    'l': ('float', None),
    'seed': ('int', 0),
    'trials': ('int', None),
    'out': ('str', None),
    'workers': ('int', None),
    'force': ('bool', False),
}


def _coerce(name, kind, value):
    """Returns (value, error message or None)"""
    if value is None:
        return None, None
    try:
        if kind == 'int':
            if isinstance(value, bool) or float(value) != int(float(value)):
                return None, f'{name} must be an integer'
            return int(float(value)), None
        if kind == 'float':
            return float(value), None
        if kind == 'complex':
            return complex(str(value).replace(' ', '')), None
        if kind == 'exponent':
            if not isinstance(value, (int, float)) and not PATTERNS['exponent'].match(str(value).strip()):
                return None, f'Invalid exponent for {name}: {value}'
            return parse_exponent(value), None
        if kind == 'bool':
            return parse_bool(value), None
        if kind == 'spec':
            text = str(value).strip()
            if not PATTERNS['norm_spec'].match(text):
                return None, f'Invalid norm specification for {name}: {value}'
            parse_norm_spec(text)
            return text, None
        if kind == 'symbol':
            text = str(value).strip().lower()
            if not PATTERNS['symbol'].match(text):
                return None, f'Invalid symbol for {name}: {value}'
            parse_symbol(text)
            return text, None
        if kind == 'int_list':
            return parse_int_list(value), None
        if kind.startswith('choice:'):
            choices = kind.split(':', 1)[1].split('|')
            text = str(value).strip().lower()
            if text not in choices:
                return None, f"{name} must be one of {', '.join(choices)}, got {value}"
            return text, None
        return str(value), None
    except (TypeError, ValueError) as e:
        return None, f'Invalid value for {name}: {value} ({str(e)})'


def coerce_params(raw, schema):
    """
    Fill defaults and convert raw values by schema type
    Returns: (params, list of error messages)
    """
    errors = []
    params = {}
    for key in raw:
        if key not in schema:
            errors.append(f'Unknown parameter: {key}')
    for name, (kind, default) in schema.items():
        value, error = _coerce(name, kind, raw.get(name, default))
        if error:
            errors.append(error)
        params[name] = value
    return params, errors


def validate_grid(params):
    """
    Check grid parameters and fill per-dimension defaults
    Returns: list of error messages (empty if all valid)
    """
    errors = []
    d = params.get('d')
    if d not in SUPPORTED_DIMENSIONS:
        errors.append(f'Unsupported dimension d={d}')
        return errors
    if params.get('n') is None:
        params['n'] = DEFAULT_GRIDS[d]['n']
    if params.get('l') is None:
        params['l'] = DEFAULT_GRIDS[d]['l']
    if params['n'] < 4 or params['n'] % 2:
        errors.append(f"Samples per axis must be even and at least 4, got {params['n']}")
    if not params['l'] > 0:
        errors.append(f"Box length must be positive, got {params['l']}")
    return errors


def validate_run_controls(params):
    """
    Check seed, trial count and worker count
    Returns: list of error messages (empty if all valid)
    """
    errors = []
    if params.get('seed') is not None and params['seed'] < 0:
        errors.append('Seed must be nonnegative')
    if params.get('trials') is not None and params['trials'] < 0:
        errors.append('Trial count must be nonnegative')
    if params.get('workers') is not None and params['workers'] < 1:
        errors.append('Worker count must be at least 1')
    return errors


def validate_exponents(params, names):
    """
    Check that the named exponents lie in the Banach range [1, inf]
    Returns: list of error messages (empty if all valid)
    """
    errors = []
    for name in names:
        value = params.get(name)
        if value is not None and not (1 <= value <= INF):
            errors.append(f'Exponent {name}={value} lies outside [1, inf]')
    return errors


def validate_experiment_config(raw, schema, exponent_names=()):
    """
    Validate one experiment configuration against its parameter schema
    Returns: (params, list of error messages)
    """
    full_schema = dict(COMMON_PARAMETERS)
    full_schema.update(schema)
    params, errors = coerce_params(raw, full_schema)
    if errors:
        return params, errors
    errors.extend(validate_grid(params))
    errors.extend(validate_run_controls(params))
    errors.extend(validate_exponents(params, exponent_names))
    return params, errors
