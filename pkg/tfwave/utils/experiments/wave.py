"""Nonlinear wave runs: Picard solves, reference comparison, Lipschitz probes and time refinement"""
import logging
import os
from dataclasses import replace

import numpy as np

from ..constants import INF, STREAM_DATA
from ..errors import ConfigError, ExponentMismatch
from ..grid import GridFunction, weighted_lp_norm
from ..nlw import (
    Nonlinearity, SolverConfig, constant_data_oracle, data_norms, data_to_solution_ratio, energy,
    lipschitz_exponent, lipschitz_probe, picard_solve, propagate_linear, propagate_velocity, reference_solve,
    save_trajectory, solve_with_bisection, time_refinement_order, trajectory_distance
)
from ..samplers import gabor_superposition, gaussian, normalized, run_trials, trial_rng
from ..tfnorms import AmalgamSpec, ModulationSpec, default_window
from .common import ExperimentContext, ExperimentOutcome, as_pair, grid_from

logger = logging.getLogger(__name__)

CONTRACTION_LIMIT = 0.6

SOLVER_PARAMETERS = {
    'theorem': ('choice:t1|t2|t3', 't1'),
    'p': ('exponent', 2.0),
    'q': ('exponent', 1.0),
    's': ('float', 0.0),
    'gamma': ('float', 0.0),
    'k': ('int', 1),
    'lambda': ('complex', 1.0),
    'nonlinearity': ('choice:power|sine', 'power'),
    'T': ('float', 0.1),
    'nt': ('int', 33),
    'tol': ('float', 1e-10),
    'max_iter': ('int', 60),
    'data': ('choice:gaussian|gabor|constant', 'gaussian'),
    'amplitude': ('float', 0.1),
    'width': ('float', 1.0),
    'quadrature': ('choice:trapezoid|simpson', 'trapezoid'),
    'bisect': ('bool', True),
    'trials': ('int', 0),
}

REFERENCE_PARAMETERS = dict(SOLVER_PARAMETERS, m=('int', 4), tolerance=('float', 1e-5),
                            oracle_tolerance=('float', 1e-6))

DATA_LIPSCHITZ_PARAMETERS = dict(SOLVER_PARAMETERS, nt=('int', 17), eps=('float', 1e-3), trials=('int', 20))

REFINEMENT_PARAMETERS = dict(SOLVER_PARAMETERS, T=('float', 0.5), amplitude=('float', 0.5),
                             levels=('int_list', [17, 33, 65]), order_min=('float', 1.7),
                             order_max=('float', 2.3))

LIPSCHITZ_PARAMETERS = {
    'p': ('exponent', 2.0),
    'q': ('exponent', 1.0),
    's': ('float', 0.0),
    'k': ('int', 1),
    'lambda': ('complex', 1.0),
    'amplitude': ('float', 1.0),
}


def conjugate_exponent(q):
    if q == 1:
        return INF
    if q == INF:
        return 1.0
    return q / (q - 1)


def monitor_spec(params):
    """M^{p,1}_s for t1, M^{p,q}_s for t2, W(FL^q_s, L^p_gamma) for t3"""
    theorem = params['theorem']
    if theorem == 't1':
        return ModulationSpec(params['p'], 1.0, params['s'])
    if not conjugate_exponent(params['q']) > 2 * params['k'] * params['d']:
        raise ExponentMismatch(f"q' > 2kd fails for q={params['q']}, k={params['k']}, d={params['d']}")
    if theorem == 't2':
        return ModulationSpec(params['p'], params['q'], params['s'])
    if params['nonlinearity'] != 'power' and params['q'] != 1:
        raise ConfigError("Series nonlinearities in amalgam runs need q = 1")
    return AmalgamSpec(params['q'], params['s'], params['p'], params['gamma'])


def nonlinearity_from(params):
    if params.get('nonlinearity') == 'sine':
        return Nonlinearity.sine()
    try:
        return Nonlinearity.power(params['lambda'], params['k'])
    except ValueError as e:
        raise ConfigError(str(e))


def initial_data(params, grid, seed):
    """(u0, u1) with u1 = 0; gaussian and gabor data scaled to the given L^2 norm"""
    if params['data'] == 'constant':
        u0 = GridFunction(grid, np.full(grid.shape, params['amplitude'], dtype=np.complex128))
    elif params['data'] == 'gabor':
        u0 = normalized(gabor_superposition(grid, trial_rng(seed, STREAM_DATA, 0)), params['amplitude'])
    else:
        u0 = normalized(gaussian(grid, width=params['width']), params['amplitude'])
    return u0, GridFunction.zeros(grid)


def solver_config(params):
    monitor = monitor_spec(params)
    try:
        return SolverConfig(T=params['T'], n_t=params['nt'], tol=params['tol'], max_iter=params['max_iter'],
                            monitor=monitor, quadrature=params['quadrature'])
    except ValueError as e:
        raise ConfigError(str(e))


def run_solve(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    cfg = solver_config(params)
    F = nonlinearity_from(params)
    u0, u1 = initial_data(params, grid, params['seed'])
    result = solve_with_bisection(u0, u1, F, cfg) if params['bisect'] else picard_solve(u0, u1, F, cfg)
    diagnostics = result.diagnostics.as_dict()
    data_u0, data_u1 = data_norms(u0, u1, cfg.monitor)
    if ctx.out_dir:
        save_trajectory(result.trajectory, os.path.join(ctx.out_dir, 'trajectory'), diagnostics)
    checks = {
        'converged': result.diagnostics.converged,
        'aia_bound': result.diagnostics.within_aia_bound,
        'geometric_decay': all(r <= CONTRACTION_LIMIT for r in result.diagnostics.contraction_ratios),
    }
    extras = {'diagnostics': diagnostics, 'data_norms': [data_u0, data_u1],
              'norms': [float(n) for n in result.trajectory.norms]}
    return ExperimentOutcome(checks=checks, extras=extras)


def run_reference_compare(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    cfg = solver_config(params)
    F = nonlinearity_from(params)
    u0, u1 = initial_data(params, grid, params['seed'])
    substeps = (params['nt'] - 1) * params['m']
    if substeps < 10:
        raise ConfigError(f"(nt - 1) * m must be at least 10 for the reference step, got {substeps}")

    picard = picard_solve(u0, u1, F, cfg)
    reference = reference_solve(u0, u1, F, cfg.T / substeps, cfg.T, record_every=params['m'])
    distance = trajectory_distance(picard.trajectory, reference)
    logger.info(f"Picard vs reference distance: {distance:.3e}")
    outcome = ExperimentOutcome(
        checks={'reference_agreement': distance <= params['tolerance']},
        extras={'distance': distance, 'iterations': picard.diagnostics.iterations,
                'reference_dt': cfg.T / substeps},
    )
    if params['data'] == 'constant':
        oracle = constant_data_oracle(params['amplitude'], 0.0, F, picard.trajectory.times)
        picked = np.array([s.values.flat[0] for s in picard.trajectory.states])
        oracle_error = float(np.max(np.abs(picked - oracle)))
        outcome.extras['oracle_error'] = oracle_error
        outcome.checks['oracle_agreement'] = oracle_error <= params['oracle_tolerance']
    return outcome


def run_lipschitz_probe(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    F = nonlinearity_from(params)
    r = lipschitz_exponent(params['q'], params['k'])
    window = default_window(grid)

    def evaluate(rng, _):
        u = gabor_superposition(grid, rng, amplitude=params['amplitude'])
        v = gabor_superposition(grid, rng, amplitude=params['amplitude'])
        return as_pair(lipschitz_probe(F, u, v, params['p'], params['q'], params['s'], window))

    rows = run_trials(evaluate, params['seed'], ctx.stream, params['trials'], ctx.workers)
    return ExperimentOutcome(rows=rows, extras={'r': r})


def run_data_lipschitz(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    cfg = solver_config(params)
    F = nonlinearity_from(params)
    u0, u1 = initial_data(params, grid, params['seed'])

    def evaluate(rng, _):
        du0 = normalized(gabor_superposition(grid, rng), params['eps'])
        du1 = normalized(gabor_superposition(grid, rng), params['eps'])
        return as_pair(data_to_solution_ratio(u0, u1, du0, du1, F, cfg))

    return ExperimentOutcome(rows=run_trials(evaluate, params['seed'], ctx.stream, params['trials'], ctx.workers))


def run_time_refinement(params, ctx: ExperimentContext) -> ExperimentOutcome:
    grid = grid_from(params)
    levels = params['levels']
    if len(levels) < 3:
        raise ConfigError("Time refinement needs at least three levels")
    cfg = replace(solver_config(params), n_t=levels[0])
    F = nonlinearity_from(params)
    u0, u1 = initial_data(params, grid, params['seed'])
    order, gaps = time_refinement_order(u0, u1, F, cfg, levels)
    return ExperimentOutcome(
        checks={'order': params['order_min'] <= order <= params['order_max']},
        extras={'order': order, 'gaps': gaps, 'levels': levels,
                'data_norm': weighted_lp_norm(u0, 2)},
    )

LINEAR_PARAMETERS = {
    'mode': ('int', 3),
    'T': ('float', 1.0),
    'steps': ('int', 10),
    'exactness_tolerance': ('float', 1e-12),
    'energy_tolerance': ('float', 1e-8),
}


def run_linear_wave(params, ctx: ExperimentContext) -> ExperimentOutcome:
    """Plane waves e^{2 pi i k x} evolve as cos(2 pi t |k|); linear energy is conserved"""
    grid = grid_from(params)
    if not 0 < abs(params['mode']) < grid.n // 2:
        raise ConfigError(f"Mode must lie in 1..{grid.n // 2 - 1}, got {params['mode']}")
    k = params['mode'] / grid.l
    times = np.linspace(0.0, params['T'], params['steps'] + 1)

    plane = GridFunction.from_callable(grid, lambda *x: np.exp(2j * np.pi * k * x[0]))
    zero = GridFunction.zeros(grid)
    exactness = max(float(np.max(np.abs(propagate_linear(plane, zero, t).values
                                        - np.cos(2 * np.pi * t * abs(k)) * plane.values)))
                    for t in times)

    u0 = gaussian(grid)
    u1 = gabor_superposition(grid, trial_rng(params['seed'], STREAM_DATA, 0))
    energies = [energy(propagate_linear(u0, u1, t), propagate_velocity(u0, u1, t)) for t in times]
    drift = max(abs(e - energies[0]) for e in energies) / energies[0]
    logger.info(f"Plane-wave error {exactness:.3e}, relative energy drift {drift:.3e}")
    return ExperimentOutcome(
        checks={'plane_wave': exactness <= params['exactness_tolerance'],
                'energy': drift <= params['energy_tolerance']},
        extras={'plane_wave_error': exactness, 'energy_drift': drift, 'energy': energies[0]},
    )
