"""python -m flowminer.pipeline <command> [--config FILE] [overrides …]"""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
