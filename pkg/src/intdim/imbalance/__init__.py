"""Class-wise ID and the imbalance-mitigation artifacts derived from it"""

from .classwise import ClasswiseRun, classwise_id, run_classwise
from .mitigation import (
    TRANSFORM_MODES,
    WEIGHT_KINDS,
    class_balanced_probs,
    derive_report,
    dro_margins,
    frequency_priors,
    id_imbalance_ratio,
    id_sampling_probs,
    imbalance_ratio,
    instance_balanced_probs,
    inverse_cardinality_weights,
    ldam_cardinality_margins,
    ldam_margins,
    logit_adjust_deltas,
    loss_weights,
    progressive_blend,
    stamp,
    transform_profile,
)

__all__ = [
    'ClasswiseRun',
    'TRANSFORM_MODES',
    'WEIGHT_KINDS',
    'class_balanced_probs',
    'classwise_id',
    'derive_report',
    'dro_margins',
    'frequency_priors',
    'id_imbalance_ratio',
    'id_sampling_probs',
    'imbalance_ratio',
    'instance_balanced_probs',
    'inverse_cardinality_weights',
    'ldam_cardinality_margins',
    'ldam_margins',
    'logit_adjust_deltas',
    'loss_weights',
    'progressive_blend',
    'run_classwise',
    'stamp',
    'transform_profile',
]
