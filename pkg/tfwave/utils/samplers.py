"""Seeded random test functions and the trial runner"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .constants import GABOR_ATOMS, INNER_FRACTION
from .grid import GridFunction, GridSpec, weighted_lp_norm

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class TrialResult:
    trial: int
    seed: int
    lhs: float
    rhs: float
    ratio: float

    def as_row(self) -> dict:
        return {'trial': self.trial, 'seed': self.seed, 'lhs': self.lhs, 'rhs': self.rhs, 'ratio': self.ratio}


def trial_seed(seed: int, stream: int, trial: int) -> int:
    """Sub-seed (seed, stream, trial) packed as seed * 2^40 + stream * 2^32 + trial"""
    if seed < 0 or not 0 <= stream < 256 or not 0 <= trial < (1 << 32):
        raise ValueError(f"Seed components out of range: seed={seed}, stream={stream}, trial={trial}")
    return (int(seed) << 40) | (int(stream) << 32) | int(trial)


def trial_rng(seed: int, stream: int, trial: int) -> np.random.Generator:
    """Philox-4x64 generator keyed by the packed sub-seed"""
    sub = trial_seed(seed, stream, trial)
    key = np.array([sub & _MASK64, (sub >> 64) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def gabor_superposition(spec: GridSpec, rng: np.random.Generator, atoms: int = GABOR_ATOMS,
                        amplitude: float = 1.0, xi_fraction: float = INNER_FRACTION) -> GridFunction:
    """Sum of modulated Gaussians with centers in the inner half box and frequencies in xi_fraction of the band"""
    coords = spec.coordinates()
    values = np.zeros(spec.shape, dtype=np.complex128)
    xi_max = xi_fraction * spec.band
    for _ in range(atoms):
        center = rng.uniform(-spec.l / 4, spec.l / 4, size=spec.d)
        freq = rng.uniform(-xi_max, xi_max, size=spec.d)
        width = rng.uniform(0.5, 2.0)
        coeff = complex(rng.normal(), rng.normal()) / np.sqrt(atoms)
        envelope = np.exp(-np.pi * sum((x - c) ** 2 for x, c in zip(coords, center)) / width ** 2)
        phase = np.exp(2j * np.pi * sum(x * w for x, w in zip(coords, freq)))
        values += coeff * envelope * phase
    return GridFunction(spec, amplitude * values)


def gaussian(spec: GridSpec, amplitude: float = 1.0, width: float = 1.0) -> GridFunction:
    return GridFunction.from_callable(
        spec, lambda *x: amplitude * np.exp(-np.pi * sum(c ** 2 for c in x) / width ** 2))


def normalized(f: GridFunction, target: float) -> GridFunction:
    """f rescaled to the given L^2 norm"""
    norm = weighted_lp_norm(f, 2)
    return f * (target / norm) if norm > 0 else f


def run_trials(evaluate: Callable[[np.random.Generator, int], Tuple[float, float]], seed: int,
               stream: int, trials: int, workers: int = 1, offset: int = 0) -> List[TrialResult]:
    """Evaluate (lhs, rhs) for trials offset..offset+trials-1; results keep trial order"""
    def one(trial: int) -> TrialResult:
        lhs, rhs = evaluate(trial_rng(seed, stream, trial), trial)
        ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else float('inf'))
        logger.debug(f"Trial {trial}: lhs={lhs:.6e} rhs={rhs:.6e} ratio={ratio:.6e}")
        return TrialResult(trial, trial_seed(seed, stream, trial), float(lhs), float(rhs), float(ratio))

    indices = range(offset, offset + trials)
    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, indices))
    return [one(trial) for trial in indices]


def max_ratio(results: List[TrialResult]) -> Optional[float]:
    return max((r.ratio for r in results), default=None)
