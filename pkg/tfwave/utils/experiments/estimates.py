"""Product, embedding, convolution and derivative-bound estimates as seeded ratio experiments"""
import logging

from ..constants import GABOR_ATOMS, INNER_FRACTION
from ..errors import ConfigError
from ..samplers import gabor_superposition, run_trials
from ..tfnorms import (
    Window, check_embedding, check_embedding_condition, check_product_estimate,
    check_product_numerology, convolution_check, default_derivative_order, default_window,
    lemma_l3_bound, product_exponent
)
from .common import ExperimentContext, ExperimentOutcome, as_pair, grid_from

logger = logging.getLogger(__name__)

PRODUCT_PARAMETERS = {
    'N': ('int', 3),
    'p': ('exponent', 2.0),
    'q': ('exponent', 1.0),
    'r': ('exponent', None),
    's': ('float', 0.0),
    'gamma': ('float', 0.0),
    'space': ('choice:modulation|amalgam', 'modulation'),
    'atoms': ('int', GABOR_ATOMS),
}

EMBEDDING_PARAMETERS = {
    'r': ('exponent', 2.0),
    'q': ('exponent', 1.0),
    's': ('float', 1.0),
    'gamma': ('float', 0.0),
    'p': ('exponent', 2.0),
    'atoms': ('int', GABOR_ATOMS),
}

LEMMA_PARAMETERS = {
    'p': ('exponent', 1.0),
    'R': ('float', 1.0),
    'k': ('int', None),
    'atoms': ('int', GABOR_ATOMS),
}

CONVOLUTION_PARAMETERS = {
    'q': ('exponent', 1.0),
    's': ('float', 0.0),
    'p': ('exponent', 2.0),
    'gamma': ('float', 0.0),
    'atoms': ('int', GABOR_ATOMS),
}


def run_product_check(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    n_factors = params['N']
    if n_factors < 1:
        raise ConfigError(f"N must be at least 1, got {n_factors}")
    r = params['r'] if params['r'] is not None else product_exponent(n_factors, params['q'])
    check_product_numerology(n_factors, r, params['q'])
    window = default_window(grid, compact=params['space'] == 'amalgam')
    xi_fraction = INNER_FRACTION / n_factors

    def evaluate(rng, _):
        factors = [gabor_superposition(grid, rng, params['atoms'], xi_fraction=xi_fraction)
                   for _ in range(n_factors)]
        return as_pair(check_product_estimate(factors, params['p'], r, params['q'], params['s'], window,
                                              params['space'], params['gamma']))

    rows = run_trials(evaluate, params['seed'], ctx.stream, params['trials'], ctx.workers)
    return ExperimentOutcome(rows=rows, extras={'r': r, 'N': n_factors, 'xi_fraction': xi_fraction})


def run_embedding_check(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    check_embedding_condition(grid.d, params['q'], params['r'])
    window = Window.bump(grid)

    def evaluate(rng, _):
        f = gabor_superposition(grid, rng, params['atoms'])
        return as_pair(check_embedding(f, params['r'], params['q'], params['s'], params['gamma'],
                                       params['p'], window))

    outcome = ExperimentOutcome(rows=run_trials(evaluate, params['seed'], ctx.stream, params['trials'], ctx.workers))
    if params['q'] == params['r']:
        outcome.checks['equal_exponents'] = all(row.ratio <= 1 + 1e-10 for row in outcome.rows)
    return outcome


def run_lemma_l3(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    support = Window.bump(grid, params['R']).g
    k = params['k'] if params['k'] is not None else default_derivative_order(params['p'], grid.d)

    def evaluate(rng, _):
        f = support * gabor_superposition(grid, rng, params['atoms'])
        return as_pair(lemma_l3_bound(f, params['p'], params['R'], k))

    rows = run_trials(evaluate, params['seed'], ctx.stream, params['trials'], ctx.workers)
    return ExperimentOutcome(rows=rows, extras={'k': k})


def run_convolution_check(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    window = Window.bump(grid)
    support = window.g

    def evaluate(rng, _):
        kernel = support * gabor_superposition(grid, rng, params['atoms'])
        f = gabor_superposition(grid, rng, params['atoms'])
        return as_pair(convolution_check(kernel, f, window, params['q'], params['s'], params['p'],
                                         params['gamma']))

    return ExperimentOutcome(rows=run_trials(evaluate, params['seed'], ctx.stream, params['trials'], ctx.workers))
