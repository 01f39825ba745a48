from pathlib import Path
from typing import Optional

import structlog
from starlette.config import Config

from hypertrig.config import DEFAULT_TOLERANCES, V1, Tolerances
from hypertrig.config_utils import get_report_for_invalid_config
from hypertrig.errors import HypertrigException
from hypertrig.logging import get_logging_level

logger = structlog.get_logger()

config = Config(".env") if Path(".env").is_file() else Config()

LOGGING_LEVEL = get_logging_level(config("LOGGING_LEVEL", default="WARNING"))
HYPERTRIG_CONFIG: Optional[str] = config("HYPERTRIG_CONFIG", default=None)


class InvalidConfigFile(HypertrigException):
    def __init__(self, path: str, report: str) -> None:
        super().__init__(report)
        self.path = path
        self.report = report


def load_tolerances(path: Optional[str] = None) -> Tolerances:
    """
    Tolerances from the TOML file at `path`, else from HYPERTRIG_CONFIG, else
    the defaults.
    """
    path = path or HYPERTRIG_CONFIG
    if path is None:
        return DEFAULT_TOLERANCES
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as e:
        raise InvalidConfigFile(path, f"cannot read config file {path}: {e}") from e
    parsed = V1.parse_toml(text)
    if not isinstance(parsed, V1):
        raise InvalidConfigFile(path, get_report_for_invalid_config(parsed, text, path))
    logger.debug("loaded tolerances", path=path, tolerance=parsed.tolerance.dict())
    return parsed.tolerance
