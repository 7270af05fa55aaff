"""Fourier multiplier operator-norm checks and symbol norms"""
import logging

from ..errors import ConfigError
from ..multipliers import (
    Cutoff, estimate_operator_norm, split_symbol, symbol_amalgam_norm, symbol_kernel_norm,
    symbol_modulation_norm
)
from ..parse_utils import parse_norm_spec, parse_symbol
from ..tfnorms import Window
from .common import ExperimentContext, ExperimentOutcome, grid_from

logger = logging.getLogger(__name__)

MULTIPLIER_PARAMETERS = {
    'symbol': ('symbol', 'sinpow:1:1'),
    'in': ('spec', 'mod:p=2,q=1,s=0'),
    'out': ('spec', 'mod:p=2,q=1,s=1'),
    'rounds': ('int', 3),
    'dir': ('str', None),
}

SYMBOL_NORM_PARAMETERS = {
    'symbol': ('symbol', 'sinpow:1:1'),
    'norm': ('choice:amalgam|kernel|modulation', 'amalgam'),
    'part': ('choice:full|sing|osc', 'full'),
    'p': ('exponent', 1.0),
    'gamma': ('float', 1.0),
    'xi_max': ('float', 64.0),
    'tolerance': ('float', 0.05),
    'trials': ('int', 0),
}


def run_multiplier_check(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    sym = parse_symbol(params['symbol'])
    report = estimate_operator_norm(sym, parse_norm_spec(params['in']), parse_norm_spec(params['out']),
                                    seed=params['seed'], trials=params['trials'], spec=grid,
                                    stream=ctx.stream, rounds=params['rounds'], workers=ctx.workers)
    return ExperimentOutcome(rows=report.trials, extras={'reference_norm': report.reference_norm})


def _part(sym, part, grid):
    if part == 'full':
        return sym
    sing, osc = split_symbol(sym, Cutoff(), grid)
    return sing if part == 'sing' else osc


def run_symbol_norm(params, ctx: ExperimentContext) -> ExperimentOutcome:
    """Symbol norm and its stability when the truncation (or the box) doubles"""
    grid = grid_from(params)
    sym = parse_symbol(params['symbol'])
    norm = params['norm']
    if params['part'] != 'full' and norm != 'kernel':
        raise ConfigError("Split parts are only supported for the kernel norm")

    if norm == 'amalgam':
        window = Window.bump(grid)
        first = symbol_amalgam_norm(sym, params['p'], params['gamma'], window, params['xi_max'])
        second = symbol_amalgam_norm(sym, params['p'], params['gamma'], window, 2 * params['xi_max'])
        values = (first.value, second.value)
        extras = {'profile': second.profile}
    elif norm == 'kernel':
        larger = grid.enlarge()
        values = (symbol_kernel_norm(_part(sym, params['part'], grid), grid, params['gamma']),
                  symbol_kernel_norm(_part(sym, params['part'], larger), larger, params['gamma']))
        extras = {}
    else:
        larger = grid.enlarge()
        values = (symbol_modulation_norm(sym, grid), symbol_modulation_norm(sym, larger))
        extras = {}

    change = abs(values[1] - values[0]) / values[0] if values[0] > 0 else 0.0
    logger.info(f"{norm} norm of {params['symbol']} ({params['part']}): {values[0]:.6e} -> {values[1]:.6e}")
    extras.update({'value': values[0], 'doubled_value': values[1], 'relative_change': change})
    checks = {'finite': all(v < float('inf') for v in values)}
    if norm != 'modulation':
        checks['stable'] = change < params['tolerance']
    return ExperimentOutcome(checks=checks, extras=extras)
