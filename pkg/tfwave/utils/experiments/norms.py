"""Modulation and amalgam norm evaluation"""
import logging

from ..constants import GABOR_ATOMS, STREAM_DATA
from ..grid import weighted_lp_norm
from ..parse_utils import parse_norm_spec
from ..samplers import gabor_superposition, gaussian, run_trials, trial_rng
from ..tfnorms import ModulationSpec, Window, spec_norm
from .common import ExperimentContext, ExperimentOutcome, grid_from, window_for

logger = logging.getLogger(__name__)

PARAMETERS = {
    'f': ('choice:gaussian|gabor|bump', 'gaussian'),
    'spec': ('spec', 'mod:2,2,0'),
    'trials': ('int', 0),
    'atoms': ('int', GABOR_ATOMS),
    'tolerance': ('float', 1e-6),
}


def _is_l2(spec):
    return isinstance(spec, ModulationSpec) and spec.p == 2 and spec.q == 2 and spec.s == 0


def run_norms(params, ctx: ExperimentContext) -> ExperimentOutcome:
    """Norm of a named function; identity trials against ||f||_2 for the M^{2,2} norm"""
    grid = grid_from(params)
    spec = parse_norm_spec(params['spec'])
    window = window_for(grid, spec)

    if params['f'] == 'gaussian':
        f = gaussian(grid)
    elif params['f'] == 'bump':
        f = Window.bump(grid).g
    else:
        f = gabor_superposition(grid, trial_rng(params['seed'], STREAM_DATA, 0), params['atoms'])

    value = spec_norm(f, spec, window)
    l2 = weighted_lp_norm(f, 2)
    logger.info(f"{params['spec']} norm of {params['f']}: {value:.12f} (L2 {l2:.12f})")
    outcome = ExperimentOutcome(extras={'value': value, 'l2_norm': l2, 'spec': params['spec']})
    tolerance = params['tolerance']

    if params['f'] == 'gaussian':
        outcome.extras['closed_form_l2'] = 2.0 ** (-grid.d / 4.0)
    if _is_l2(spec):
        outcome.checks['l2_identity'] = abs(value - l2) <= tolerance * l2
        if params['f'] == 'gaussian':
            outcome.checks['closed_form'] = abs(value - 2.0 ** (-grid.d / 4.0)) <= tolerance

    if params['trials']:
        def evaluate(rng, _):
            u = gabor_superposition(grid, rng, params['atoms'])
            return spec_norm(u, spec, window), weighted_lp_norm(u, 2)

        outcome.rows = run_trials(evaluate, params['seed'], ctx.stream, params['trials'], ctx.workers)
        if _is_l2(spec):
            outcome.checks['l2_identity_trials'] = all(abs(r.ratio - 1) <= tolerance for r in outcome.rows)
    return outcome
