# CLI and environment configuration
from .cli_config import (
    args_to_config, create_argument_parser, estimator_from_args, print_configuration_summary
)
from .settings import Settings

__all__ = [
    'Settings',
    'args_to_config',
    'create_argument_parser',
    'estimator_from_args',
    'print_configuration_summary',
]
