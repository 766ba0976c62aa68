import sys
from typing import Optional

from loguru import logger

HUMAN_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {extra[event]} | {message}"


def configure_logging(level: str = "INFO", serialize: bool = True, path: Optional[str] = None):
    """
    One stderr sink; serialized records are single JSON lines.
    path, when given, keeps a JSON-lines copy of the run at DEBUG.
    """
    logger.remove()
    logger.configure(extra={"event": "-"})
    logger.add(sys.stderr, level=level, backtrace=True, diagnose=False, serialize=serialize,
               format="{message}" if serialize else HUMAN_FORMAT)
    if path:
        logger.add(path, level="DEBUG", backtrace=True, diagnose=False, serialize=True)
    return logger
