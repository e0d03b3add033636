"""
Intrinsic dimension toolkit.

Estimates the intrinsic dimension of point clouds (FisherS, MLE, TLE), per class of a
labeled dataset, and turns the class-wise estimates into class-imbalance mitigation
artifacts.
"""

from .version import __version__
from .errors import IntDimError
from .models import ClassIdProfile, IdEstimate, LabeledDataset, MitigationReport

__all__ = [
    '__version__',
    'ClassIdProfile',
    'IdEstimate',
    'IntDimError',
    'LabeledDataset',
    'MitigationReport',
]
