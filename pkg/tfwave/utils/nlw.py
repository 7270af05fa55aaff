"""Nonlinear wave equation u_tt - Laplacian u = F(u): propagators, Duhamel quadrature, Picard and reference solvers"""
from __future__ import annotations

import glob
import json
import logging
import math
import os
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy.integrate import simpson, solve_ivp, trapezoid

from .constants import (
    AIA_GROWTH_FACTOR, BLOWUP_THRESHOLD, DEFAULT_SERIES_DEGREE, FREQUENCY, INF, MANIFEST_FILE,
    MAX_BISECTIONS
)
from .errors import BlowupDetected, ContractionFailure, ExponentMismatch
from .grid import (
    GridFunction, check_compatible, check_exponent, forward_fourier, inverse_fourier, laplacian, read_binary,
    weighted_lp_norm, write_binary
)
from .multipliers import Symbol, apply_multiplier
from .reports import write_json_atomic
from .tfnorms import (
    AmalgamSpec, ModulationSpec, NormSpec, RatioReport, Window, default_window, modulation_norm,
    spec_norm
)

logger = logging.getLogger(__name__)

POWER = 'power'
SERIES = 'series'
SINE = 'sine'
QUADRATURES = ('trapezoid', 'simpson')


@dataclass(frozen=True)
class Nonlinearity:
    """F(u) = lam |u|^(2k) u, or a truncated series sum of c_jk u^j conj(u)^k with F(0) = 0"""
    kind: str
    lam: complex = 0.0
    k: int = 0
    coeffs: Mapping[Tuple[int, int], complex] = field(default_factory=dict)
    truncation: int = DEFAULT_SERIES_DEGREE

    @classmethod
    def power(cls, lam, k):
        if k < 0 or int(k) != k:
            raise ValueError(f"Power-law exponent k must be a nonnegative integer, got {k}")
        return cls(POWER, lam=complex(lam), k=int(k))

    @classmethod
    def series(cls, coeffs, truncation=DEFAULT_SERIES_DEGREE, kind=SERIES):
        if abs(coeffs.get((0, 0), 0.0)) > 0:
            raise ValueError("Series nonlinearities need F(0) = 0 (c_00 = 0)")
        kept = {(int(j), int(k)): complex(c) for (j, k), c in coeffs.items()
                if j + k <= truncation and c != 0}
        return cls(kind, coeffs=kept, truncation=int(truncation))

    @classmethod
    def sine(cls, truncation=DEFAULT_SERIES_DEGREE):
        """Taylor polynomial of sin z"""
        coeffs = {(2 * m + 1, 0): (-1) ** m / math.factorial(2 * m + 1)
                  for m in range((truncation + 1) // 2)}
        return cls.series(coeffs, truncation, kind=SINE)

    @property
    def is_zero(self):
        if self.kind == POWER:
            return self.lam == 0
        return not self.coeffs

    def evaluate(self, z):
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == POWER:
            return self.lam * np.abs(z) ** (2 * self.k) * z
        result = np.zeros_like(z)
        conj = np.conj(z)
        for (j, k), c in self.coeffs.items():
            result = result + c * z ** j * conj ** k
        return result


def apply_nonlinearity(F, u):
    return u.with_values(F.evaluate(u.values))


def truncation_tail(F, radius):
    """Bound on the dropped terms of the series at |z| <= radius"""
    if F.kind == POWER:
        return 0.0
    if F.kind == SINE:
        tail, m = 0.0, (F.truncation + 1) // 2
        while True:
            term = radius ** (2 * m + 1) / math.factorial(2 * m + 1)
            tail += term
            if term < 1e-17 * max(tail, 1e-300) or m > F.truncation + 200:
                return tail
            m += 1
    by_degree: Dict[int, float] = {}
    for (j, k), c in F.coeffs.items():
        by_degree[j + k] = by_degree.get(j + k, 0.0) + abs(c)
    top = max(by_degree, default=0)
    if top < 2 or by_degree.get(top - 1, 0.0) == 0:
        return 0.0
    rate = by_degree[top] / by_degree[top - 1] * radius
    if rate >= 1:
        return INF
    return by_degree[top] * radius ** top * rate / (1 - rate)


@dataclass(frozen=True)
class SolverConfig:
    T: float
    n_t: int
    tol: float = 1e-10
    max_iter: int = 60
    monitor: NormSpec = field(default_factory=lambda: ModulationSpec(2.0, 1.0, 0.0))
    R: Optional[float] = None
    mu: Optional[float] = None
    quadrature: str = 'trapezoid'

    def __post_init__(self):
        if not 0 < self.T <= 1:
            raise ValueError(f"Final time must lie in (0, 1], got {self.T}")
        if self.n_t < 2:
            raise ValueError(f"At least two time nodes are needed, got {self.n_t}")
        if not self.tol > 0:
            raise ValueError(f"Tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")
        if self.quadrature not in QUADRATURES:
            raise ValueError(f"Unknown quadrature {self.quadrature}")

    def times(self):
        return np.linspace(0.0, self.T, self.n_t)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: List[GridFunction]
    norms: np.ndarray
    velocities: Optional[List[GridFunction]] = None

    def __post_init__(self):
        if len(self.times) != len(self.states) or len(self.times) != len(self.norms):
            raise ValueError("Trajectory times, states and norms differ in length")
        if len(self.times) and self.times[0] != 0:
            raise ValueError("Trajectories start at t = 0")


@dataclass
class PicardDiagnostics:
    iterations: int
    differences: List[float]
    contraction_ratios: List[float]
    solution_norm: float
    linear_norm: float
    within_aia_bound: bool
    T: float
    converged: bool = True
    bisections: int = 0

    def as_dict(self):
        return {
            'iterations': self.iterations,
            'differences': list(self.differences),
            'contraction_ratios': list(self.contraction_ratios),
            'solution_norm': self.solution_norm,
            'linear_norm': self.linear_norm,
            'within_aia_bound': self.within_aia_bound,
            'T': self.T,
            'converged': self.converged,
            'bisections': self.bisections,
        }


@dataclass(frozen=True, eq=False)
class PicardResult:
    trajectory: Trajectory
    diagnostics: PicardDiagnostics


def propagate_linear(u0, u1, t):
    """K'(t) u0 + K(t) u1"""
    check_compatible(u0, u1)
    if t == 0:
        return u0.with_values(u0.values)
    return apply_multiplier(Symbol.wave_cos(t), u0) + apply_multiplier(Symbol.wave_sinc(t), u1)


def propagate_velocity(u0, u1, t):
    """d/dt of the linear solution: Laplacian K(t) u0 + K'(t) u1"""
    check_compatible(u0, u1)
    if t == 0:
        return u1.with_values(u1.values)
    return laplacian(apply_multiplier(Symbol.wave_sinc(t), u0)) + apply_multiplier(Symbol.wave_cos(t), u1)


def integrate_nodes(samples, dt, rule='trapezoid'):
    """Integral over axis 0 of samples taken on a uniform grid of spacing dt"""
    if rule not in QUADRATURES:
        raise ValueError(f"Unknown quadrature {rule}")
    # Simpson needs three nodes; the first step is always trapezoid
    if rule == 'simpson' and len(samples) > 2:
        return simpson(samples, dx=dt, axis=0)
    return trapezoid(samples, dx=dt, axis=0)


def _sinc_stack(lags, r):
    """sin(2 pi lag |xi|) / (2 pi |xi|) for every lag, with the value lag at xi = 0"""
    lags = lags.reshape((-1,) + (1,) * r.ndim)
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, np.sin(2 * np.pi * lags * safe) / (2 * np.pi * safe), lags)


def duhamel_all(forces, times, quadrature='trapezoid'):
    """B F at every node: the integral of K(t_i - tau) F(tau) over the nodes tau_j <= t_i"""
    if len(forces) != len(times):
        raise ValueError("One forcing state per time node is required")
    check_compatible(*forces)
    spec = forces[0].spec
    if all(not np.any(f.values) for f in forces):
        return [GridFunction.zeros(spec) for _ in forces]
    hats = np.stack([forward_fourier(f).values for f in forces])
    r = spec.radius(FREQUENCY)
    dt = times[1] - times[0] if len(times) > 1 else 0.0
    out = [GridFunction.zeros(spec)]
    for i in range(1, len(times)):
        kernel = _sinc_stack(times[i] - times[:i + 1], r)
        summed = integrate_nodes(kernel * hats[:i + 1], dt, quadrature)
        out.append(inverse_fourier(GridFunction(spec, summed, FREQUENCY)))
    return out


def duhamel(forces, t_index, quadrature='trapezoid'):
    if not 0 <= t_index < len(forces.times):
        raise IndexError(f"Time index {t_index} outside 0..{len(forces.times) - 1}")
    return duhamel_all(forces.states[:t_index + 1], forces.times[:t_index + 1], quadrature)[t_index]


def monitor_window(cfg, u):
    return default_window(u.spec, compact=isinstance(cfg.monitor, AmalgamSpec))


def picard_solve(u0, u1, F, cfg):
    """Iterate u <- u_lin + B F(u) on the time grid until the monitored update falls below tol"""
    check_compatible(u0, u1)
    times = cfg.times()
    window = monitor_window(cfg, u0)

    def monitor(f):
        return spec_norm(f, cfg.monitor, window)

    linear = [propagate_linear(u0, u1, t) for t in times]
    current = linear
    differences: List[float] = []
    converged = False
    for iteration in range(1, cfg.max_iter + 1):
        forces = [apply_nonlinearity(F, u) for u in current]
        updates = duhamel_all(forces, times, cfg.quadrature)
        following = [lin + b for lin, b in zip(linear, updates)]
        delta = max(monitor(a - b) for a, b in zip(following, current))
        differences.append(delta)
        current = following
        logger.debug(f"Picard iteration {iteration}: difference {delta:.3e}")
        # blowup
        if not np.isfinite(delta):
            raise ContractionFailure(f"Picard iteration diverged at iteration {iteration} (T={cfg.T})")
        if delta < cfg.tol:
            converged = True
            break
    if not converged:
        raise ContractionFailure(
            f"No convergence within {cfg.max_iter} iterations at T={cfg.T} (last difference {differences[-1]:.3e})")

    norms = np.array([monitor(u) for u in current])
    linear_norm = max(monitor(u) for u in linear)
    solution_norm = float(np.max(norms))
    ratios = [b / a for a, b in zip(differences, differences[1:]) if a > 0]
    diagnostics = PicardDiagnostics(
        iterations=len(differences),
        differences=differences,
        contraction_ratios=ratios,
        solution_norm=solution_norm,
        linear_norm=float(linear_norm),
        within_aia_bound=solution_norm <= AIA_GROWTH_FACTOR * linear_norm * (1 + 1e-12),
        T=cfg.T,
    )
    logger.info(f"Picard converged in {diagnostics.iterations} iterations at T={cfg.T}")
    return PicardResult(Trajectory(times, current, norms), diagnostics)


def solve_with_bisection(u0, u1, F, cfg, max_halvings=MAX_BISECTIONS):
    """picard_solve, halving T after each ContractionFailure; reports the largest converging T"""
    for halving in range(max_halvings + 1):
        try:
            result = picard_solve(u0, u1, F, cfg)
        except ContractionFailure as e:
            if halving == max_halvings:
                raise
            logger.warning(f"{e}; halving T to {cfg.T / 2}")
            cfg = replace(cfg, T=cfg.T / 2)
            continue
        result.diagnostics.bisections = halving
        return result
    raise ContractionFailure("Bisection exhausted")


def energy(u, v):
    """||v||_2^2 + ||grad u||_2^2, the gradient term by Parseval"""
    u_hat = forward_fourier(u)
    gradient = np.sum((2 * np.pi * u.spec.radius(FREQUENCY)) ** 2 * np.abs(u_hat.values) ** 2)
    return weighted_lp_norm(v, 2) ** 2 + float(gradient) * u.spec.cell_volume(FREQUENCY)


def reference_solve(u0, u1, F, dt, T, record_every=1):
    """Classical RK4 on (u, v = u_t) with a spectral Laplacian; step T / ceil(T / dt)"""
    check_compatible(u0, u1)
    if not 0 < dt <= T / 10 * (1 + 1e-12):
        raise ValueError(f"Reference step must satisfy 0 < dt <= T/10, got dt={dt}, T={T}")
    steps = int(math.ceil(T / dt - 1e-9))
    h = T / steps

    def rhs(u, v):
        return v, laplacian(u) + apply_nonlinearity(F, u)

    u, v = u0, u1
    times, states, velocities = [0.0], [u], [v]
    for step in range(1, steps + 1):
        k1u, k1v = rhs(u, v)
        k2u, k2v = rhs(u + k1u * (h / 2), v + k1v * (h / 2))
        k3u, k3v = rhs(u + k2u * (h / 2), v + k2v * (h / 2))
        k4u, k4v = rhs(u + k3u * h, v + k3v * h)
        u = u + (k1u + 2 * k2u + 2 * k3u + k4u) * (h / 6)
        v = v + (k1v + 2 * k2v + 2 * k3v + k4v) * (h / 6)
        peak = np.max(np.abs(u.values))
        if not np.isfinite(peak) or peak > BLOWUP_THRESHOLD:
            raise BlowupDetected(f"Reference solution exceeded {BLOWUP_THRESHOLD:g} at t={step * h:.4f}")
        if step % record_every == 0 or step == steps:
            times.append(step * h)
            states.append(u)
            velocities.append(v)
    norms = np.array([weighted_lp_norm(s, 2) for s in states])
    return Trajectory(np.array(times), states, norms, velocities)


def constant_data_oracle(c0, c1, F, times):
    """u'' = F(u) for spatially constant data, integrated by DOP853 at tight tolerance"""
    def system(_, y):
        u = complex(y[0], y[1])
        force = complex(F.evaluate(np.array([u]))[0])
        return [y[2], y[3], force.real, force.imag]

    y0 = [complex(c0).real, complex(c0).imag, complex(c1).real, complex(c1).imag]
    times = np.asarray(times, dtype=float)
    solution = solve_ivp(system, (0.0, float(times[-1])), y0, method='DOP853', t_eval=times,
                         rtol=1e-13, atol=1e-15)
    if not solution.success:
        raise RuntimeError(f"ODE oracle failed: {solution.message}")
    return solution.y[0] + 1j * solution.y[1]


def trajectory_distance(a, b):
    """sup over shared time nodes of the L^2 distance"""
    scale = max(float(a.times[-1]), 1.0)
    best = None
    for i, t in enumerate(a.times):
        matches = np.nonzero(np.abs(b.times - t) <= 1e-9 * scale)[0]
        if matches.size:
            gap = weighted_lp_norm(a.states[i] - b.states[int(matches[0])], 2)
            best = gap if best is None else max(best, gap)
    if best is None:
        raise ValueError("Trajectories share no time nodes")
    return float(best)


def time_refinement_order(u0, u1, F, cfg, levels=(17, 33, 65)):
    """Observed order log2(e1/e2) from successive differences of Picard solutions on refined time grids"""
    solutions = [picard_solve(u0, u1, F, replace(cfg, n_t=n)).trajectory for n in levels]
    gaps = [trajectory_distance(coarse, fine) for coarse, fine in zip(solutions, solutions[1:])]
    order = math.log2(gaps[0] / gaps[1]) if len(gaps) > 1 and gaps[1] > 0 else INF
    logger.info(f"Time refinement gaps {gaps}, observed order {order:.3f}")
    return order, gaps


def self_convergence_order(u0, u1, F, dt, T):
    """Observed order log2(e(dt) / e(dt/2)) against the Richardson extrapolant from dt/2 and dt/4 (about 4 for RK4)"""
    finals = [reference_solve(u0, u1, F, dt / m, T).states[-1] for m in (1, 2, 4)]
    extrapolant = finals[2] + (finals[2] - finals[1]) * (1.0 / 15.0)
    coarse = weighted_lp_norm(finals[0] - extrapolant, 2)
    fine = weighted_lp_norm(finals[1] - extrapolant, 2)
    return math.log2(coarse / fine) if fine > 0 else INF


def data_norms(u0, u1, monitor):
    """u0 in the monitor space, u1 in the same space one derivative weaker"""
    window = default_window(u0.spec, compact=isinstance(monitor, AmalgamSpec))
    return spec_norm(u0, monitor, window), spec_norm(u1, monitor.with_weight(monitor.s - 1), window)


def data_to_solution_ratio(u0, u1, du0, du1, F, cfg):
    """sup_t ||u(t) - w(t)|| against ||du0|| + ||du1|| for data (u0, u1) and (u0 + du0, u1 + du1)"""
    base = picard_solve(u0, u1, F, cfg).trajectory
    moved = picard_solve(u0 + du0, u1 + du1, F, cfg).trajectory
    window = monitor_window(cfg, u0)
    lhs = max(spec_norm(a - b, cfg.monitor, window) for a, b in zip(moved.states, base.states))
    rhs = sum(data_norms(du0, du1, cfg.monitor))
    return RatioReport.from_pair(lhs, rhs)


def lipschitz_exponent(q, k):
    """r = q / (2k(1 - q) + 1), required to lie in [1, inf]"""
    q = check_exponent(q)
    if k == 0:
        return q
    if q == INF:
        raise ExponentMismatch(f"No finite r for q=inf, k={k}")
    denominator = 2 * k * (1 - q) + 1
    if denominator == 0:
        return INF
    r = q / denominator
    if not r >= 1:
        raise ExponentMismatch(f"r = q/(2k(1-q)+1) = {r} leaves [1, inf] for q={q}, k={k}")
    return float(r)


def lipschitz_probe(F, u, v, p, q, s, g):
    """||F(u) - F(v)||_{M^{p,r}_{s-1}} against ||u - v||_{M^{p,q}_{s-1}} (||u||^2k + ||v||^2k)"""
    if F.kind != POWER:
        raise ValueError("Lipschitz probes are defined for power-law nonlinearities")
    r = lipschitz_exponent(q, F.k)
    source = ModulationSpec(p, q, s - 1)
    numerator = modulation_norm(apply_nonlinearity(F, u) - apply_nonlinearity(F, v), g, ModulationSpec(p, r, s - 1))
    if numerator == 0:
        return RatioReport(0.0, 0.0, 0.0)
    growth = modulation_norm(u, g, source) ** (2 * F.k) + modulation_norm(v, g, source) ** (2 * F.k)
    return RatioReport.from_pair(numerator, modulation_norm(u - v, g, source) * growth)


def save_trajectory(traj, directory, diagnostics=None):
    """state_XXXX.tfwg binaries plus manifest.json with times, norms and diagnostics"""
    os.makedirs(directory, exist_ok=True)
    files = []
    for i, state in enumerate(traj.states):
        name = f"state_{i:04d}.tfwg"
        write_binary(state, os.path.join(directory, name))
        files.append(name)
    manifest = {
        'times': [float(t) for t in traj.times],
        'norms': [float(n) for n in traj.norms],
        'states': files,
        'diagnostics': diagnostics or {},
    }
    return write_json_atomic(os.path.join(directory, MANIFEST_FILE), manifest)


def load_trajectory(directory):
    with open(os.path.join(directory, MANIFEST_FILE), encoding='utf-8') as handle:
        manifest = json.load(handle)
    names = manifest.get('states') or sorted(os.path.basename(p) for p in glob.glob(os.path.join(directory, 'state_*.tfwg')))
    states = [read_binary(os.path.join(directory, name)) for name in names]
    norms = np.array([float(n) for n in manifest['norms']])
    return Trajectory(np.array(manifest['times'], dtype=float), states, norms), manifest.get('diagnostics', {})
