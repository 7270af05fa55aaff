import math

import numpy as np
import pytest

from tfwave.utils.constants import INF
from tfwave.utils.errors import ConfigError, InvalidSymbolParams
from tfwave.utils.multipliers import eval_symbol
from tfwave.utils.parse_utils import (
    format_norm_spec, parse_bool, parse_exponent, parse_extra_args, parse_int_list, parse_norm_spec,
    parse_symbol
)
from tfwave.utils.reports import fingerprint, jsonable, read_trials_csv, write_trials_csv
from tfwave.utils.samplers import TrialResult
from tfwave.utils.tfnorms import AmalgamSpec, ModulationSpec
from tfwave.utils.validators import coerce_params, validate_experiment_config


class TestParsing:
    """Exponents, norm specifications, symbols and command-line extras"""

    def test_exponents(self):
        assert parse_exponent('inf') == INF
        assert parse_exponent('OO') == INF
        assert parse_exponent('1.5') == 1.5
        assert parse_exponent(2) == 2.0
        with pytest.raises(ConfigError):
            parse_exponent('two')

    def test_norm_specs(self):
        """Positional and keyword forms describe the same space"""
        assert parse_norm_spec('mod:2,1,0') == ModulationSpec(2, 1, 0)
        assert parse_norm_spec('mod:p=2,q=inf,s=1') == ModulationSpec(2, INF, 1)
        assert parse_norm_spec('am:q=1,s=0,p=2,gamma=0.5') == AmalgamSpec(1, 0, 2, 0.5)
        spec = AmalgamSpec(1, 0, INF, 1)
        assert parse_norm_spec(format_norm_spec(spec)) == spec

    @pytest.mark.parametrize('text', ['2,1,0', 'mod:2,1', 'mod:p=2,r=1', 'lp:p=2'])
    def test_bad_norm_specs(self, text):
        with pytest.raises(ConfigError):
            parse_norm_spec(text)

    def test_symbols(self):
        assert eval_symbol(parse_symbol('cos'), 0.0) == 1
        assert eval_symbol(parse_symbol('wavesinc:0.5'), 0.0) == pytest.approx(0.5)
        assert eval_symbol(parse_symbol('kgcos:0.4'), 0.0) == pytest.approx(math.cos(0.4))
        with pytest.raises(ConfigError):
            parse_symbol('tan')
        with pytest.raises(ConfigError):
            parse_symbol('sinpow:1')
        with pytest.raises(InvalidSymbolParams):
            parse_symbol('sinpow:2:1')

    def test_extra_args(self):
        assert parse_extra_args(['--N', '3', '--bisect', '--T=0.5', '--max-iter', '9']) == {
            'N': '3', 'bisect': True, 'T': '0.5', 'max_iter': '9'}
        assert parse_extra_args([]) == {}
        with pytest.raises(ConfigError):
            parse_extra_args(['stray'])

    def test_booleans_and_lists(self):
        assert parse_bool('yes') is True
        assert parse_bool('0') is False
        with pytest.raises(ConfigError):
            parse_bool('maybe')
        assert parse_int_list('17, 33 65') == [17, 33, 65]


class TestValidation:
    """Schema coercion and experiment validation"""

    SCHEMA = {
        'p': ('exponent', 2.0),
        'N': ('int', 3),
        'lambda': ('complex', 1.0),
        'space': ('choice:modulation|amalgam', 'modulation'),
    }

    def test_defaults_and_coercion(self):
        params, errors = coerce_params({'p': 'inf', 'N': '4', 'lambda': '1+2j'}, self.SCHEMA)
        assert errors == []
        assert params == {'p': INF, 'N': 4, 'lambda': 1 + 2j, 'space': 'modulation'}

    def test_errors_are_collected(self):
        _, errors = coerce_params({'p': 'x', 'N': '2.5', 'space': 'lp', 'extra': 1}, self.SCHEMA)
        assert len(errors) == 4
        assert 'Unknown parameter: extra' in errors

    def test_grid_defaults(self):
        params, errors = validate_experiment_config({'d': 2}, self.SCHEMA, ('p',))
        assert errors == []
        assert (params['n'], params['l']) == (128, 16.0)

    def test_grid_and_exponent_errors(self):
        _, errors = validate_experiment_config({'d': 3}, self.SCHEMA)
        assert errors == ['Unsupported dimension d=3']
        _, errors = validate_experiment_config({'p': '0.5', 'seed': -1}, self.SCHEMA, ('p',))
        assert len(errors) == 2


class TestReports:
    """Fingerprints, JSON conversion and trial files"""

    def test_fingerprint_ignores_run_controls(self):
        params = {'d': 1, 'n': 128, 'p': 2.0}
        base = fingerprint('product-check', params)
        assert fingerprint('product-check', dict(params, seed=4, trials=9, out='x', workers=2)) == base
        assert fingerprint('product-check', dict(params, p=1.0)) != base
        assert fingerprint('embedding-check', params) != base

    def test_jsonable(self):
        value = jsonable({'a': np.float64(INF), 'b': np.arange(2), 'c': 1 - 2j, 'd': np.bool_(True)})
        assert value == {'a': 'inf', 'b': [0, 1], 'c': [1.0, -2.0], 'd': True}

    def test_trials_csv(self, tmp_path):
        rows = [TrialResult(0, 7, 1.0, 2.0, 0.5), TrialResult(1, 8, 0.1, 0.3, 0.1 / 0.3)]
        path = write_trials_csv(str(tmp_path / 'trials.csv'), rows)
        assert read_trials_csv(path)[1] == rows[1].as_row()
        with open(path) as handle:
            assert handle.readline().strip() == 'trial,seed,lhs,rhs,ratio'
