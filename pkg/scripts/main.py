"""
Modular congruences verification script.

Runs one ``modcong`` command, e.g. ``python scripts/main.py -ap out verify all``,
and exits with its status.
"""

import sys
from datetime import datetime

from loguru import logger

from modular_congruences import calculate_runtime
from modular_congruences.utils.commands import run


if __name__ == "__main__":
    start_time = datetime.now()
    code = run(sys.argv[1:])
    hours, minutes, seconds = calculate_runtime(datetime.now(), start_time)
    if code == 0:
        logger.success(
            f"script finished in {hours} hours {minutes} mins {int(seconds)} seconds"
        )
    sys.exit(code)
