"""Shared experiment types and helpers"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..constants import STREAM_VERIFY
from ..grid import GridSpec
from ..samplers import TrialResult
from ..tfnorms import AmalgamSpec, default_window

logger = logging.getLogger(__name__)


@dataclass
class ExperimentContext:
    stream: int = STREAM_VERIFY
    workers: int = 1
    out_dir: Optional[str] = None


@dataclass
class ExperimentOutcome:
    rows: List[TrialResult] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    extras: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Experiment:
    kind: str
    run: Callable[[dict, ExperimentContext], ExperimentOutcome]
    parameters: Dict[str, Tuple[str, Any]]
    ratio_based: bool = False
    exponents: Tuple[str, ...] = ()
    # Option naming the report directory; multiplier-check spends --out on the output norm
    out_key: str = 'out'

    def control_keys(self, keys: Tuple[str, ...]) -> Tuple[str, ...]:
        return tuple(self.out_key if key == 'out' else key for key in keys)


def grid_from(params: dict) -> GridSpec:
    return GridSpec(params['d'], params['n'], params['l'])


def window_for(grid: GridSpec, spec):
    """Bump window for amalgam specs, unit-L^2 Gaussian otherwise"""
    return default_window(grid, compact=isinstance(spec, AmalgamSpec))


def as_pair(report) -> Tuple[float, float]:
    return report.lhs, report.rhs
