"""Fourier multiplier symbols, their splitting and norms, and randomized operator-norm estimates"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .constants import (
    FREQUENCY, INF, KERNEL_TAPER_FRACTION, REFINEMENT_ATOMS, REFINEMENT_ROUNDS, REFINEMENT_SCALE,
    STREAM_VERIFY, SYMBOL_COS, SYMBOL_CUSTOM, SYMBOL_KG_COS, SYMBOL_KG_SINC, SYMBOL_LOCAL_L,
    SYMBOL_LOCAL_N, SYMBOL_ONE, SYMBOL_SCAN_FRACTION, SYMBOL_SINPOW, SYMBOL_WAVE_COS, SYMBOL_WAVE_SINC,
    CUTOFF_INNER, CUTOFF_OUTER
)
from .errors import GridMismatch, InvalidSymbolParams, SpecKindMismatch, WindowNotCompactlySupported
from .grid import GridFunction, GridSpec, Weight, check_exponent, forward_fourier, inverse_fourier
from .samplers import TrialResult, gabor_superposition, run_trials, trial_rng, trial_seed
from .tfnorms import (
    AmalgamSpec, ModulationSpec, NormSpec, Window, amalgam_norm, default_window, fl_norm,
    modulation_norm, spec_norm
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Symbol:
    kind: str
    alpha: float = 0.0
    delta: float = 0.0
    t: float = 0.0
    grid: Optional[GridFunction] = None

    @classmethod
    def sinpow(cls, alpha, delta):
        """sin(|xi|^alpha) / |xi|^delta with delta <= alpha <= 1, alpha > 0"""
        if not (alpha > 0 and delta <= alpha <= 1):
            raise InvalidSymbolParams(f"SinPow needs delta <= alpha <= 1 and alpha > 0, got alpha={alpha}, delta={delta}")
        return cls(SYMBOL_SINPOW, alpha=float(alpha), delta=float(delta))

    @classmethod
    def cos(cls):
        return cls(SYMBOL_COS)

    @classmethod
    def wave_cos(cls, t):
        return cls(SYMBOL_WAVE_COS, t=float(t))

    @classmethod
    def wave_sinc(cls, t):
        return cls(SYMBOL_WAVE_SINC, t=float(t))

    @classmethod
    def one(cls):
        return cls(SYMBOL_ONE)

    @classmethod
    def custom(cls, values):
        if values.domain != FREQUENCY:
            values = GridFunction(values.spec, values.values, FREQUENCY)
        return cls(SYMBOL_CUSTOM, grid=values)

    @property
    def radial(self):
        return self.kind != SYMBOL_CUSTOM

    def radial_values(self, r):
        """Closed-form values at |xi| = r, removable singularities filled by their limits"""
        r = np.asarray(r, dtype=float)
        safe = np.where(r > 0, r, 1.0)
        if self.kind == SYMBOL_SINPOW:
            limit = 1.0 if self.alpha == self.delta else 0.0
            return np.where(r > 0, np.sin(safe ** self.alpha) / safe ** self.delta, limit)
        if self.kind == SYMBOL_COS:
            return np.cos(r)
        if self.kind == SYMBOL_WAVE_COS:
            return np.cos(2 * np.pi * self.t * r)
        if self.kind == SYMBOL_WAVE_SINC:
            return np.where(r > 0, np.sin(2 * np.pi * self.t * safe) / (2 * np.pi * safe), self.t)
        if self.kind == SYMBOL_KG_COS:
            return np.cos(self.t * _kg_frequency(r))
        if self.kind == SYMBOL_KG_SINC:
            omega = _kg_frequency(r)
            return np.sin(self.t * omega) / omega
        if self.kind == SYMBOL_ONE:
            return np.ones_like(r)
        raise InvalidSymbolParams(f"Symbol kind {self.kind} has no closed form")


def _kg_frequency(r):
    return np.sqrt(1.0 + (2 * np.pi * r) ** 2)


def klein_gordon_symbols(t):
    """cos(t w) and sin(t w)/w with w = (1 + 4 pi^2 |xi|^2)^(1/2), the (I - Laplacian) propagators"""
    return Symbol(SYMBOL_KG_COS, t=float(t)), Symbol(SYMBOL_KG_SINC, t=float(t))


@dataclass(frozen=True)
class Cutoff:
    """Smooth radial step: 1 on |xi| <= inner, 0 on |xi| >= outer, values in [0, 1]"""
    inner: float = CUTOFF_INNER
    outer: float = CUTOFF_OUTER

    def __post_init__(self):
        if not 0 <= self.inner < self.outer:
            raise ValueError(f"Cutoff needs 0 <= inner < outer, got {self.inner}, {self.outer}")

    def __call__(self, r):
        u = (np.asarray(r, dtype=float) - self.inner) / (self.outer - self.inner)
        left, right = _psi(1.0 - u), _psi(u)
        return left / (left + right)


def _psi(t):
    positive = t > 0
    return np.where(positive, np.exp(-1.0 / np.where(positive, t, 1.0)), 0.0)


def eval_symbol(sym, xi):
    """Value at one frequency point; custom symbols are read at the nearest grid frequency"""
    point = np.atleast_1d(np.asarray(xi, dtype=float))
    if sym.radial:
        return complex(sym.radial_values(np.sqrt(np.sum(point ** 2))))
    spec = sym.grid.spec
    index = np.rint(point * spec.l + spec.n // 2).astype(int)
    if point.size != spec.d or np.any(index < 0) or np.any(index >= spec.n):
        raise ValueError(f"Frequency {tuple(point)} lies outside the symbol grid {spec}")
    return complex(sym.grid.values[tuple(index)])


def symbol_values(sym, spec):
    if not sym.radial:
        if sym.grid.spec != spec:
            raise GridMismatch(f"Custom symbol lives on {sym.grid.spec}, requested {spec}")
        return sym.grid
    return GridFunction(spec, sym.radial_values(spec.radius(FREQUENCY)), FREQUENCY)


def apply_multiplier(sym, f):
    """H_sigma f = inverse_fourier(sigma * forward_fourier(f))"""
    f_hat = forward_fourier(f)
    return inverse_fourier(f_hat * symbol_values(sym, f.spec))


def _grid_for(sym, spec):
    if spec is not None:
        return spec
    if sym.radial:
        raise ValueError(f"Symbol {sym.kind} has no grid of its own; pass the grid to sample it on")
    return sym.grid.spec


def split_symbol(sym, chi, spec=None):
    """(chi sigma, (1 - chi) sigma) as custom symbols on the grid; closed-form symbols need spec"""
    spec = _grid_for(sym, spec)
    values = symbol_values(sym, spec)
    weight = chi(spec.radius(FREQUENCY))
    return Symbol.custom(values * weight), Symbol.custom(values * (1.0 - weight))


def symbol_side_grid(spec):
    """Grid whose sample points are the frequencies of spec, so symbol samples can be windowed and transformed"""
    return GridSpec(spec.d, spec.n, spec.n / spec.l)


@dataclass(frozen=True)
class SymbolNormReport:
    value: float
    profile: List[Tuple[float, float]] = field(default_factory=list)


def symbol_amalgam_norm(sym, p, gamma, g, xi_max):
    """sup over translates |x| <= xi_max of ||sigma T_x g||_{FL^p} <x>^gamma / ||g||_{FL^p}"""
    if not g.compact:
        raise WindowNotCompactlySupported("Symbol amalgam norms need a bump window")
    p = check_exponent(p)
    weight = Weight(gamma)
    profile = []
    if sym.radial:
        local = GridSpec(g.spec.d, SYMBOL_LOCAL_N, SYMBOL_LOCAL_L)
        window = g.resample(local).g
        reference = fl_norm(window, p)
        coords = local.coordinates()
        rest = sum(c ** 2 for c in coords[1:]) if local.d > 1 else 0.0
        step = g.radius * SYMBOL_SCAN_FRACTION
        for j in range(int(np.floor(xi_max / step + 1e-9)) + 1):
            center = j * step
            radius = np.sqrt((coords[0] + center) ** 2 + rest)
            local_value = fl_norm(window * sym.radial_values(radius), p) / reference
            profile.append((center, float(local_value * weight(center))))
    else:
        side = symbol_side_grid(sym.grid.spec)
        window = g.resample(side).g
        reference = fl_norm(window, p)
        stride = max(1, int(round(g.radius * SYMBOL_SCAN_FRACTION / side.dx)))
        axis = side.axis()
        half = side.n // 2
        for node in itertools.product(range(0, side.n, stride), repeat=side.d):
            center = float(np.sqrt(sum(axis[i] ** 2 for i in node)))
            if center > xi_max:
                continue
            shifted = np.roll(window.values, tuple(i - half for i in node), axis=tuple(range(side.d)))
            local_value = fl_norm(GridFunction(side, shifted * sym.grid.values), p) / reference
            profile.append((center, float(local_value * weight(center))))
        profile.sort()
    value = max((v for _, v in profile), default=0.0)
    logger.debug(f"Symbol {sym.kind} amalgam norm (p={p}, gamma={gamma}, xi_max={xi_max}): {value:.6e}")
    return SymbolNormReport(value, profile)


def _tapered(values, r, edge):
    # smooth rolloff to zero at the band edge
    return values * Cutoff(KERNEL_TAPER_FRACTION * edge, edge)(r)


def symbol_kernel_norm(sym, spec, gamma=0.0):
    """W(FL^inf_1, L^1_gamma) norm of the kernel of the band-tapered symbol"""
    values = symbol_values(sym, spec)
    tapered = values.with_values(_tapered(values.values, spec.radius(FREQUENCY), spec.band))
    kernel = inverse_fourier(tapered)
    return amalgam_norm(kernel, Window.bump(spec), AmalgamSpec(INF, 1.0, 1.0, gamma))


def symbol_modulation_norm(sym, spec):
    """M^{inf,1} norm of the symbol restricted to a box and tapered at its edge

    Closed-form symbols are sampled on the spatial points of spec; custom symbols on their own frequencies.
    """
    if sym.radial:
        side = spec
        raw = sym.radial_values(side.radius())
    else:
        side = symbol_side_grid(sym.grid.spec)
        raw = sym.grid.values
    f = GridFunction(side, _tapered(raw, side.radius(), side.l / 2))
    return modulation_norm(f, default_window(side), ModulationSpec(INF, 1.0, 0.0))


def osc_derivative_profile(sym, chi, spec, order=1):
    """sup of |d^order sigma_osc| <xi>^delta over the grid, finite differences along each axis"""
    _, osc = split_symbol(sym, chi, spec)
    weight = Weight(sym.delta if sym.kind == SYMBOL_SINPOW else 0.0)(spec.radius(FREQUENCY))
    best = 0.0
    for axis in range(spec.d):
        values = osc.grid.values
        for _ in range(order):
            values = np.gradient(values, spec.dxi, axis=axis)
        best = max(best, float(np.max(np.abs(values) * weight)))
    return best


@dataclass(frozen=True)
class PeetreReport:
    lhs: np.ndarray
    rhs: np.ndarray
    holds: bool
    constant_free_holds: bool


def peetre_check(x, xi, delta):
    """<xi>^-delta <x - xi>^-|delta| against 2^(|delta|/2) <x>^-delta

    x and xi hold one point per row (shape (m,) in d=1 or (m, d)); delta is scalar or shape (m,).
    """
    x, xi = np.asarray(x, dtype=float), np.asarray(xi, dtype=float)
    if x.ndim < 2:
        x, xi = x.reshape(-1, 1), xi.reshape(-1, 1)
    delta = np.asarray(delta, dtype=float)

    def bracket(v):
        return np.sqrt(1.0 + np.sum(v ** 2, axis=-1))

    lhs = bracket(xi) ** (-delta) * bracket(x - xi) ** (-np.abs(delta))
    plain = bracket(x) ** (-delta)
    rhs = 2.0 ** (np.abs(delta) / 2.0) * plain
    slack = 1e-12
    return PeetreReport(lhs, rhs, bool(np.all(lhs <= rhs * (1 + slack))),
                        bool(np.all(lhs <= plain * (1 + slack))))


@dataclass(frozen=True)
class OperatorNormReport:
    trials: List[TrialResult]
    reference_norm: float

    @property
    def max_ratio(self):
        return max((t.ratio for t in self.trials), default=None)


def _check_specs(in_spec, out_spec):
    if type(in_spec) is not type(out_spec):
        raise SpecKindMismatch(f"Input {type(in_spec).__name__} and output {type(out_spec).__name__} differ in kind")
    if in_spec != out_spec.with_weight(in_spec.s):
        raise SpecKindMismatch(f"Output {out_spec} differs from input {in_spec} beyond the smoothness weight")


def reference_norm(sym, in_spec, out_spec, spec):
    """W(FL^1, L^inf_gamma) symbol norm for modulation specs, kernel norm for amalgam specs"""
    if isinstance(in_spec, ModulationSpec):
        return symbol_amalgam_norm(sym, 1.0, out_spec.s - in_spec.s, Window.bump(spec), spec.band).value
    return symbol_kernel_norm(sym, spec, abs(in_spec.gamma))


def estimate_operator_norm(sym, in_spec, out_spec, seed=0, trials=100, spec=None, stream=STREAM_VERIFY,
                           rounds=REFINEMENT_ROUNDS, workers=1, reference=None):
    """Ratios ||H f||_out / (||f||_in ||sigma||) over seeded Gabor superpositions plus greedy refinement"""
    _check_specs(in_spec, out_spec)
    spec = _grid_for(sym, spec)
    if reference is None:
        reference = reference_norm(sym, in_spec, out_spec, spec)
    window = default_window(spec, compact=isinstance(in_spec, AmalgamSpec))

    def parts(f):
        lhs = spec_norm(apply_multiplier(sym, f), out_spec, window)
        return lhs, spec_norm(f, in_spec, window) * reference

    results = run_trials(lambda rng, trial: parts(gabor_superposition(spec, rng)), seed, stream, trials, workers)
    if results and rounds:
        best = max(results, key=lambda r: r.ratio)
        best_f = gabor_superposition(spec, trial_rng(seed, stream, best.trial))
        for k in range(rounds):
            trial = trials + k
            nudge = gabor_superposition(spec, trial_rng(seed, stream, trial), atoms=REFINEMENT_ATOMS,
                                        amplitude=REFINEMENT_SCALE)
            candidate = best_f + nudge
            lhs, rhs = parts(candidate)
            result = TrialResult(trial, trial_seed(seed, stream, trial), lhs, rhs, lhs / rhs if rhs > 0 else 0.0)
            results.append(result)
            if result.ratio > best.ratio:
                best, best_f = result, candidate
    logger.info(f"Operator norm estimate for {sym.kind}: {len(results)} trials, reference {reference:.6e}")
    return OperatorNormReport(results, float(reference))
