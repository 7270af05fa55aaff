"""The acceptance suite run by verify-all"""
from typing import List, NamedTuple


class SuiteEntry(NamedTuple):
    label: str
    kind: str
    params: dict


def _multiplier_entries() -> List[SuiteEntry]:
    entries = []
    for symbol, shift in (('cos', 0), ('sinpow:1:1', 1)):
        for p in ('1', '2', 'inf'):
            entries.append(SuiteEntry(
                f'multiplier-{symbol.split(":")[0]}-p{p}', 'multiplier-check',
                {'symbol': symbol, 'in': f'mod:p={p},q=1,s=0', 'out': f'mod:p={p},q=1,s={shift}'},
            ))
    return entries


VERIFY_PLAN = [
    SuiteEntry('l2-identity-gaussian', 'norms', {'f': 'gaussian', 'spec': 'mod:2,2,0'}),
    SuiteEntry('l2-identity-trials', 'norms', {'f': 'gabor', 'spec': 'mod:2,2,0', 'trials': 100}),
    *_multiplier_entries(),
    SuiteEntry('symbol-sinpow-stability', 'symbol-norm', {'symbol': 'sinpow:1:1', 'p': 1, 'gamma': 1}),
    SuiteEntry('symbol-cos-stability', 'symbol-norm', {'symbol': 'cos', 'p': 1, 'gamma': 0}),
    SuiteEntry('product-modulation', 'product-check', {'N': 3}),
    SuiteEntry('product-amalgam', 'product-check', {'N': 3, 'space': 'amalgam'}),
    SuiteEntry('embedding', 'embedding-check', {'r': 2, 'q': 1}),
    SuiteEntry('embedding-equal-exponents', 'embedding-check', {'r': 2, 'q': 2}),
    SuiteEntry('linear-wave', 'linear-wave', {}),
    SuiteEntry('solve-t1-focusing', 'solve', {'theorem': 't1', 'lambda': 1}),
    SuiteEntry('solve-t1-defocusing', 'solve', {'theorem': 't1', 'lambda': -1}),
    SuiteEntry('reference-t1-focusing', 'reference-compare', {'theorem': 't1', 'lambda': 1}),
    SuiteEntry('reference-t1-defocusing', 'reference-compare', {'theorem': 't1', 'lambda': -1}),
    SuiteEntry('constant-data-oracle', 'reference-compare',
               {'theorem': 't1', 'lambda': -1, 'data': 'constant', 'amplitude': 0.5}),
    SuiteEntry('data-lipschitz', 'data-lipschitz', {'theorem': 't1'}),
    SuiteEntry('solve-t3', 'solve', {'theorem': 't3', 'q': 1, 'p': 2, 's': 0, 'gamma': 0}),
    SuiteEntry('reference-t3', 'reference-compare', {'theorem': 't3', 'q': 1, 'p': 2, 's': 0, 'gamma': 0}),
    SuiteEntry('constant-data-oracle-t3', 'reference-compare',
               {'theorem': 't3', 'lambda': -1, 'data': 'constant', 'amplitude': 0.5}),
]
