"""Experiment registry"""
from .common import Experiment, ExperimentContext, ExperimentOutcome
from .estimates import (
    CONVOLUTION_PARAMETERS, EMBEDDING_PARAMETERS, LEMMA_PARAMETERS, PRODUCT_PARAMETERS,
    run_convolution_check, run_embedding_check, run_lemma_l3, run_product_check
)
from .norms import PARAMETERS as NORMS_PARAMETERS, run_norms
from .operators import MULTIPLIER_PARAMETERS, SYMBOL_NORM_PARAMETERS, run_multiplier_check, run_symbol_norm
from .wave import (
    DATA_LIPSCHITZ_PARAMETERS, LINEAR_PARAMETERS, LIPSCHITZ_PARAMETERS, REFERENCE_PARAMETERS,
    REFINEMENT_PARAMETERS, SOLVER_PARAMETERS, run_data_lipschitz, run_linear_wave, run_lipschitz_probe,
    run_reference_compare, run_solve, run_time_refinement
)

EXPERIMENTS = {e.kind: e for e in (
    Experiment('norms', run_norms, NORMS_PARAMETERS),
    Experiment('product-check', run_product_check, PRODUCT_PARAMETERS, True, ('p', 'q', 'r')),
    Experiment('embedding-check', run_embedding_check, EMBEDDING_PARAMETERS, True, ('r', 'q', 'p')),
    Experiment('lemma-l3', run_lemma_l3, LEMMA_PARAMETERS, True, ('p',)),
    Experiment('convolution-check', run_convolution_check, CONVOLUTION_PARAMETERS, True, ('q', 'p')),
    Experiment('multiplier-check', run_multiplier_check, MULTIPLIER_PARAMETERS, True, out_key='dir'),
    Experiment('symbol-norm', run_symbol_norm, SYMBOL_NORM_PARAMETERS, False, ('p',)),
    Experiment('solve', run_solve, SOLVER_PARAMETERS, False, ('p', 'q')),
    Experiment('reference-compare', run_reference_compare, REFERENCE_PARAMETERS, False, ('p', 'q')),
    Experiment('lipschitz-probe', run_lipschitz_probe, LIPSCHITZ_PARAMETERS, True, ('p', 'q')),
    Experiment('data-lipschitz', run_data_lipschitz, DATA_LIPSCHITZ_PARAMETERS, True, ('p', 'q')),
    Experiment('time-refinement', run_time_refinement, REFINEMENT_PARAMETERS, False, ('p', 'q')),
    Experiment('linear-wave', run_linear_wave, LINEAR_PARAMETERS),
)}

__all__ = [
    'EXPERIMENTS',
    'Experiment',
    'ExperimentContext',
    'ExperimentOutcome',
]
