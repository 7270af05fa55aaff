"""Experiment orchestration: validation, dispatch, calibration, pass/fail and report writing"""
import logging
import os
import traceback
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .calibration import CalibrationStore
from .constants import DEFAULT_X_STRIDE, STREAM_CALIBRATE, STREAM_VERIFY
from .errors import (
    ConfigError, EmbeddingConditionFailed, ExponentMismatch, InvalidSymbolParams, LatticeIncompatible,
    SpecKindMismatch, UnsupportedExponent
)
from .experiments import EXPERIMENTS
from .experiments.common import ExperimentContext, ExperimentOutcome
from .experiments.suite import VERIFY_PLAN
from .memory_utils import check_stft_footprint, log_memory_usage, optimize_memory
from .reports import NON_FINGERPRINT_KEYS, fingerprint, write_json_atomic, write_report
from .samplers import max_ratio
from .validators import validate_experiment_config

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

# Bad parameter choices exit 2; anything else raised while running exits 3
CONFIG_ERRORS = (ConfigError, EmbeddingConditionFailed, ExponentMismatch, InvalidSymbolParams, LatticeIncompatible,
                 SpecKindMismatch, UnsupportedExponent)

# Run-control keys left out of reported params
RUN_CONTROL_KEYS = ('out', 'workers', 'force', 'config')


@dataclass
class RunResult:
    kind: str
    exit_code: int
    summary: Dict = field(default_factory=dict)
    paths: Dict[str, str] = field(default_factory=dict)
    message: str = ''

    @property
    def passed(self) -> bool:
        return self.exit_code == EXIT_PASS


class Harness:
    """Runs experiments by kind against the settings of one configuration class"""

    def __init__(self, settings):
        self.settings = settings
        self.store = CalibrationStore(settings.CAL_DIR, settings.CALIBRATION_SAFETY_FACTOR)

    def prepare(self, kind: str, raw: dict):
        """Look up the experiment and validate its raw options; raises ConfigError"""
        experiment = EXPERIMENTS.get(kind)
        if experiment is None:
            raise ConfigError(f"Unknown experiment kind: {kind} (known: {', '.join(sorted(EXPERIMENTS))})")
        params, errors = validate_experiment_config(raw, experiment.parameters, experiment.exponents)
        if errors:
            raise ConfigError('; '.join(errors))
        if params.get('trials') is None:
            params['trials'] = self.settings.DEFAULT_TRIALS
        if params.get('workers') is None:
            params['workers'] = self.settings.WORKERS
        return experiment, params

    def out_dir(self, experiment, params: dict) -> str:
        return params.get(experiment.out_key) or os.path.join(self.settings.OUTPUT_DIR, experiment.kind)

    @staticmethod
    def fingerprint(experiment, params: dict) -> str:
        return fingerprint(experiment.kind, params, experiment.control_keys(NON_FINGERPRINT_KEYS))

    @staticmethod
    def reported(experiment, params: dict) -> dict:
        skipped = experiment.control_keys(RUN_CONTROL_KEYS)
        return {k: v for k, v in params.items() if k not in skipped}

    def execute(self, experiment, params: dict, stream: int, out_dir: Optional[str]) -> ExperimentOutcome:
        log_memory_usage(f"{experiment.kind} start")
        check_stft_footprint(params['n'], params['d'], DEFAULT_X_STRIDE[params['d']],
                             self.settings.STFT_MEMORY_THRESHOLD_MB)
        logger.info(f"Running {experiment.kind} on stream {stream} with {params['trials']} trials")
        ctx = ExperimentContext(stream=stream, workers=params['workers'], out_dir=out_dir)
        outcome = experiment.run(params, ctx)
        log_memory_usage(f"{experiment.kind} end")
        optimize_memory()
        return outcome

    def summarize(self, experiment, params: dict, outcome: ExperimentOutcome, fp: str) -> dict:
        ratios = [row.ratio for row in outcome.rows]
        finite = [r for r in ratios if np.isfinite(r)]
        calibration = self.store.constant(fp) if experiment.ratio_based else None
        checks_pass = all(outcome.checks.values())
        if experiment.ratio_based and outcome.rows:
            if calibration is None:
                logger.warning(f"No calibration constant for {experiment.kind} ({fp[:12]}); "
                               "run calibrate or calibrate-suite first")
                bound_pass = False
            else:
                bound_pass = max(ratios) <= calibration
        else:
            bound_pass = True
        return {
            'kind': experiment.kind,
            'fingerprint': fp,
            'params': self.reported(experiment, params),
            'trials': len(outcome.rows),
            'max_ratio': max_ratio(outcome.rows),
            'mean_ratio': float(np.mean(finite)) if finite else None,
            'calibration_constant': calibration,
            'checks': dict(outcome.checks),
            'pass': bool(checks_pass and bound_pass),
            'results': dict(outcome.extras),
        }

    def _guarded(self, kind: str, action) -> RunResult:
        try:
            return action()
        except CONFIG_ERRORS as e:
            logger.error(f"Configuration error in {kind}: {str(e)}")
            return RunResult(kind, EXIT_CONFIG, message=str(e))
        except Exception as e:
            logger.error(f"Error during {kind}: {str(e)}")
            logger.error(traceback.format_exc())
            return RunResult(kind, EXIT_RUNTIME, message=str(e))

    def run(self, kind: str, raw: dict) -> RunResult:
        """Run one experiment on the verification stream and write trials.csv and summary.json"""
        def action():
            experiment, params = self.prepare(kind, raw)
            out_dir = self.out_dir(experiment, params)
            outcome = self.execute(experiment, params, STREAM_VERIFY, out_dir)
            summary = self.summarize(experiment, params, outcome, self.fingerprint(experiment, params))
            paths = write_report(out_dir, outcome.rows, summary)
            code = EXIT_PASS if summary['pass'] else EXIT_ASSERTION
            logger.info(f"{kind}: {'pass' if summary['pass'] else 'FAIL'} (max ratio {summary['max_ratio']})")
            return RunResult(kind, code, summary, paths)

        return self._guarded(kind, action)

    def calibrate(self, kind: str, raw: dict, force: bool = False) -> RunResult:
        """Run a ratio experiment on the calibration stream and store safety_factor * max ratio"""
        def action():
            experiment, params = self.prepare(kind, raw)
            if not experiment.ratio_based:
                raise ConfigError(f"{kind} produces no ratios to calibrate")
            out_dir = os.path.join(self.out_dir(experiment, params), 'calibration')
            outcome = self.execute(experiment, params, STREAM_CALIBRATE, out_dir)
            fp = self.fingerprint(experiment, params)
            entry = self.store.record(fp, kind, max_ratio(outcome.rows), params['seed'], len(outcome.rows),
                                      STREAM_CALIBRATE, self.reported(experiment, params),
                                      force=force or params.get('force', False))
            summary = {'kind': kind, 'fingerprint': fp, 'calibration': entry, 'results': dict(outcome.extras)}
            paths = write_report(out_dir, outcome.rows, summary)
            return RunResult(kind, EXIT_PASS, summary, paths)

        return self._guarded(kind, action)

    def _suite_options(self, entry, out_dir: str, trials: Optional[int]) -> dict:
        experiment = EXPERIMENTS[entry.kind]
        raw = dict(entry.params)
        raw[experiment.out_key] = os.path.join(out_dir, entry.label)
        if experiment.ratio_based and trials is not None and 'trials' not in entry.params:
            raw['trials'] = trials
        return raw

    def verify_all(self, out_dir: Optional[str] = None, trials: Optional[int] = None) -> RunResult:
        """Acceptance suite against the stored constants; a ratio entry without one fails"""
        out_dir = out_dir or os.path.join(self.settings.OUTPUT_DIR, 'verify-all')
        trials = trials if trials is not None else self.settings.VERIFY_ALL_TRIALS
        results: List[dict] = []
        worst = EXIT_PASS
        for entry in VERIFY_PLAN:
            result = self.run(entry.kind, self._suite_options(entry, out_dir, trials))
            results.append({'label': entry.label, 'exit_code': result.exit_code, 'message': result.message,
                            'pass': result.summary.get('pass', False),
                            'calibration_constant': result.summary.get('calibration_constant')})
            worst = max(worst, result.exit_code)

        summary = {'entries': results, 'pass': worst == EXIT_PASS}
        path = write_json_atomic(os.path.join(out_dir, 'verify_all.json'), summary)
        failed = [r['label'] for r in results if r['exit_code'] != EXIT_PASS]
        if failed:
            logger.warning(f"verify-all: {len(failed)} of {len(results)} entries failed: {', '.join(failed)}")
        else:
            logger.info(f"verify-all: all {len(results)} entries passed")
        return RunResult('verify-all', worst, summary, {'summary': path})

    def calibrate_suite(self, out_dir: Optional[str] = None, trials: Optional[int] = None,
                        force: bool = False) -> RunResult:
        """Calibrate every ratio entry of the acceptance suite into the store"""
        out_dir = out_dir or os.path.join(self.settings.OUTPUT_DIR, 'calibrate-suite')
        trials = trials if trials is not None else self.settings.VERIFY_ALL_TRIALS
        results: List[dict] = []
        worst = EXIT_PASS
        for entry in VERIFY_PLAN:
            if not EXPERIMENTS[entry.kind].ratio_based:
                continue
            result = self.calibrate(entry.kind, self._suite_options(entry, out_dir, trials), force=force)
            calibration = result.summary.get('calibration') or {}
            results.append({'label': entry.label, 'exit_code': result.exit_code, 'message': result.message,
                            'fingerprint': result.summary.get('fingerprint'), 'C_cal': calibration.get('C_cal')})
            worst = max(worst, result.exit_code)

        summary = {'entries': results, 'store': self.store.path}
        path = write_json_atomic(os.path.join(out_dir, 'calibrate_suite.json'), summary)
        logger.info(f"calibrate-suite: {len(results)} entries written to {self.store.path}")
        return RunResult('calibrate-suite', worst, summary, {'summary': path})
