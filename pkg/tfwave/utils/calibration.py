"""Append-only store of calibrated constants keyed by experiment fingerprint"""
import json
import logging
import os
from datetime import datetime, timezone
from typing import Optional

from .constants import SAFETY_FACTOR
from .errors import CalibrationExists, ConfigError
from .reports import write_json_atomic

logger = logging.getLogger(__name__)

STORE_FILE = 'store.json'


class CalibrationStore:
    """store.json maps fingerprint -> list of versioned records; the latest version is in force"""

    def __init__(self, directory: str, safety_factor: float = SAFETY_FACTOR):
        self.directory = directory
        self.safety_factor = safety_factor
        self.path = os.path.join(directory, STORE_FILE)

    def load(self) -> dict:
        if not os.path.exists(self.path):
            return {}
        try:
            with open(self.path, encoding='utf-8') as handle:
                return json.load(handle)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Calibration store {self.path} is not valid JSON: {str(e)}")

    def latest(self, fingerprint: str) -> Optional[dict]:
        versions = self.load().get(fingerprint) or []
        return versions[-1] if versions else None

    def constant(self, fingerprint: str) -> Optional[float]:
        entry = self.latest(fingerprint)
        return float(entry['C_cal']) if entry else None

    def record(self, fingerprint: str, kind: str, max_ratio: Optional[float], seed: int, trials: int,
               stream: int, params: Optional[dict] = None, force: bool = False) -> dict:
        """Store safety_factor * max_ratio as a new version; refuses to shadow an entry unless forced"""
        if max_ratio is None or trials <= 0:
            raise ConfigError("Calibration needs at least one trial")
        store = self.load()
        versions = store.setdefault(fingerprint, [])
        if versions and not force:
            raise CalibrationExists(
                f"Calibration for {kind} ({fingerprint[:12]}) exists at version {versions[-1]['version']}; use --force")
        entry = {
            'version': len(versions) + 1,
            'kind': kind,
            'C_cal': self.safety_factor * float(max_ratio),
            'max_ratio': float(max_ratio),
            'seed': int(seed),
            'trials': int(trials),
            'stream': int(stream),
            'params': params or {},
            'created': datetime.now(timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ'),
        }
        versions.append(entry)
        write_json_atomic(self.path, store)
        logger.info(f"Calibrated {kind} ({fingerprint[:12]}) version {entry['version']}: C_cal={entry['C_cal']:.6e}")
        return entry
