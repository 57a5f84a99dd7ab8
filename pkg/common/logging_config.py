"""
Logging setup shared by the command-line front end.

Library modules only create loggers (``logging.getLogger(__name__)``);
handlers are installed here, once, by whoever owns the process.
"""

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | int = "WARNING") -> None:
    """
    Install a stderr handler on the root logger, replacing one installed
    by an earlier call.

    Standard output is left alone because the CLI writes its CSV/JSON data
    there.

    :param level: Level name (``"DEBUG"``, ``"INFO"``, ...) or number.
    :raises ValueError: If ``level`` is not a known level name.
    """
    if isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        if not isinstance(resolved, int):
            raise ValueError(f"Unknown log level: {level}")
        level = resolved

    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_aoi_handler", False):
            root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._aoi_handler = True
    root.addHandler(handler)
    root.setLevel(level)
