import logging
import sys
from pathlib import Path
from typing import List, Optional

# Add the parent directory to sys.path
sys.path.append(str(Path(__file__).parent))

from modules.cli import build_parser, log_level_for, run

logger = logging.getLogger(__name__)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse the command line, configure logging and run the command.

    Returns:
        int: process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    # Configure logging
    logging.basicConfig(level=getattr(logging, log_level_for(args)),
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
                        stream=sys.stderr)
    logger.debug(f"Running {args.command}")
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
