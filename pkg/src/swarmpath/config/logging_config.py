from datetime import datetime
from pathlib import Path
import sys
import tomllib
from typing import Any

from loguru import logger
import orjson
from pydantic import ValidationError

from swarmpath.api.dependencies.common import get_settings

from .log_models import LoggingConfig, LogLevel


NO_RUN = "-"


def run_label(environment: str, seed: int) -> str:
    """Tag bound to every record emitted while a run is planning."""
    return f"{environment}#{seed}"


def default_run_context(record: dict[str, Any]) -> None:
    """Loguru patcher giving every record a ``run`` extra.

    Formats may then reference ``{extra[run]}`` whether or not the record was
    emitted inside ``logger.contextualize(run=...)``.
    """
    record["extra"].setdefault("run", NO_RUN)


def load_log_config(config_path: Path) -> LoggingConfig:
    """Load the ``[logging]`` table of a TOML file.

    Falls back to the defaults (console sink on stderr only) when the file is
    missing or the table is invalid.

    Args:
        config_path: Path to the TOML configuration file

    Returns:
        LoggingConfig: The configuration to apply.
    """
    if not config_path.is_file():
        return LoggingConfig()
    try:
        with config_path.open(mode="rb") as f:
            table = tomllib.load(f).get("logging", {})
        return LoggingConfig.model_validate(table)
    except (tomllib.TOMLDecodeError, ValidationError) as e:
        logger.error(f"Ignoring [logging] in {config_path}: {e}")
        return LoggingConfig()


def serialize_record(record: dict[str, Any]) -> str:
    """Serialize a log record to one JSON line.

    The run tag and any other bound extras are lifted to top-level keys so
    records of one seed can be filtered without parsing the message.

    Args:
        record (dict): The loguru record.

    Returns:
        str: JSON text without a trailing newline.
    """
    time = record.get("time", datetime.now())
    extra = dict(record.get("extra") or {})
    exception = record.get("exception")
    payload = {
        "time": time.isoformat(),
        "level": record["level"].name,
        "run": extra.pop("run", NO_RUN),
        "message": record.get("message"),
        "where": f"{record.get('name')}:{record.get('function')}:{record.get('line')}",
        "process": record["process"].name,
        "extra": extra,
        "exception": None if exception is None else repr(exception.value),
    }
    return orjson.dumps(payload, default=str).decode("utf-8")


def json_formatter(record: dict[str, Any]) -> str:
    """Loguru format callable writing :func:`serialize_record` output.

    Braces are doubled because loguru formats the returned string again.
    """
    line = serialize_record(record)
    return line.replace("{", "{{").replace("}", "}}") + "\n"


def setup_logging(config: LoggingConfig, level: LogLevel | None = None) -> None:
    """Replace every loguru sink with the ones ``config`` enables.

    Args:
        config: Sinks and levels to install.
        level: Console level overriding ``config.level``, e.g. from CLI flags.
    """
    logger.remove()
    logger.configure(patcher=default_run_context)

    if config.console.enabled:
        logger.add(
            sys.stderr if config.console.stream == "stderr" else sys.stdout,
            level=(level or config.level).value,
            colorize=config.console.colorize,
            format=config.console.format,
            diagnose=config.console.diagnose,
            backtrace=config.console.backtrace,
        )

    if config.file.enabled:
        logger.add(
            config.file.path,
            level=config.level.value,
            format=config.file.format,
            rotation=config.file.rotation,
            retention=config.file.retention,
            compression=config.file.compression,
            encoding="utf-8",
            enqueue=True,
        )

    if config.json_file.enabled:
        logger.add(
            config.json_file.path,
            level=config.level.value,
            format=json_formatter,
            rotation=config.json_file.rotation,
            retention=config.json_file.retention,
            compression=config.json_file.compression,
            encoding="utf-8",
            enqueue=True,
        )


def initialize_logging(level: LogLevel | None = None) -> None:
    """Install the sinks configured in the settings file.

    Args:
        level: Optional console level override.
    """
    setup_logging(load_log_config(get_settings().cfg_toml_path), level)
    logger.debug("Logging initialized")
