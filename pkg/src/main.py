"""
Main entry point for the intrinsic dimension toolkit
"""
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

# Logging setup must come before any output is emitted
from utils.logging_utils import parse_level, setup_logging

from core.commands import COMMANDS
from core.config.cli_config import create_argument_parser
from core.config.settings import Settings
from intdim.errors import ConfigError, IntDimError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the application"""
    parser = create_argument_parser()
    args = parser.parse_args(argv)

    settings = Settings.from_env()
    log_dir = Path(args.log_dir) if args.log_dir else settings.log_dir
    setup_logging(log_dir, parse_level(args.log_level or settings.log_level))

    try:
        return COMMANDS[args.command](args, settings)
    except ConfigError as e:
        logger.error("❌ [%s] %s: %s", e.stage, type(e).__name__, e)
        return EXIT_USAGE
    except IntDimError as e:
        logger.error("❌ [%s] %s: %s", e.stage, type(e).__name__, e)
        return EXIT_DATA_ERROR
    except OSError as e:
        logger.error("❌ [io] %s: %s", type(e).__name__, e)
        return EXIT_DATA_ERROR
    except KeyboardInterrupt:
        logger.warning("⏹️ Process interrupted by user")
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
