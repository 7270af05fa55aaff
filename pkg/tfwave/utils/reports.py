"""Atomic CSV/JSON report writing and experiment fingerprints"""
import csv
import hashlib
import io
import json
import logging
import math
import os

import numpy as np

from .constants import CSV_COLUMNS, SUMMARY_FILE, TRIALS_FILE

logger = logging.getLogger(__name__)

# Run-control keys never enter a fingerprint
NON_FINGERPRINT_KEYS = ('seed', 'trials', 'out', 'force', 'workers', 'config')


def jsonable(value):
    """Plain JSON types; non-finite floats become the strings 'inf', '-inf', 'nan'"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(value, complex):
        return [jsonable(value.real), jsonable(value.imag)]
    return value


def canonical_json(payload) -> str:
    return json.dumps(jsonable(payload), sort_keys=True, separators=(',', ':'))


def fingerprint(kind: str, params: dict, exclude=NON_FINGERPRINT_KEYS) -> str:
    """sha256 of the canonical JSON of kind plus params, run-control keys excluded"""
    relevant = {k: v for k, v in params.items() if k not in exclude}
    return hashlib.sha256(canonical_json({'kind': kind, 'params': relevant}).encode('utf-8')).hexdigest()


def _replace_atomically(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = path + '.tmp'
    with open(tmp, 'w', encoding='utf-8', newline='') as handle:
        handle.write(text)
        handle.flush()
        os.fsync(handle.fileno())
    os.replace(tmp, path)


def write_json_atomic(path: str, payload: dict) -> str:
    _replace_atomically(path, json.dumps(jsonable(payload), sort_keys=True, indent=2) + '\n')
    logger.debug(f"Wrote {path}")
    return path


def write_trials_csv(path: str, rows) -> str:
    """One row per trial with columns trial, seed, lhs, rhs, ratio"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    count = 0
    for row in rows:
        record = row.as_row() if hasattr(row, 'as_row') else row
        writer.writerow([_csv_cell(record[column]) for column in CSV_COLUMNS])
        count += 1
    _replace_atomically(path, buffer.getvalue())
    logger.debug(f"Wrote {count} trial rows to {path}")
    return path


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_trials_csv(path: str) -> list:
    with open(path, newline='', encoding='utf-8') as handle:
        reader = csv.DictReader(handle)
        return [{
            'trial': int(row['trial']),
            'seed': int(row['seed']),
            'lhs': float(row['lhs']),
            'rhs': float(row['rhs']),
            'ratio': float(row['ratio']),
        } for row in reader]


def write_report(out_dir: str, rows, summary: dict) -> dict:
    """trials.csv and summary.json under out_dir"""
    os.makedirs(out_dir, exist_ok=True)
    return {
        'trials': write_trials_csv(os.path.join(out_dir, TRIALS_FILE), rows),
        'summary': write_json_atomic(os.path.join(out_dir, SUMMARY_FILE), summary),
    }
