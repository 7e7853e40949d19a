from collections.abc import Callable
import os
from pathlib import Path
import tomllib
from tomllib import TOMLDecodeError
from typing import Any, Final, Literal

from loguru import logger
from pydantic import BaseModel, Field, field_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from swarmpath.core.exceptions import ConfigurationError
from swarmpath.core.planner import (
    Objective,
    PenaltyMode,
    PlannerOptions,
    SweepAxis,
)
from swarmpath.core.pso import PsoConfig


SettingsDict = dict[str, Any]
"""Type alias for a dictionary containing settings key-value pairs."""

TomlLoader = Callable[[], dict[str, Any]]
"""Type alias for a function that loads and returns TOML configuration."""

ServerLogLevel = Literal["debug", "info", "warning", "error", "critical"]
"""Type definition for valid server log levels."""

CONFIG_ENV_VAR: Final[str] = "SWARMPATH_CONFIG"
"""Environment variable holding an alternative config.toml path."""


class AppSettings(BaseModel):
    """Settings for the HTTP planning service.

    Attributes:
        SERVER_HOST: Host address for the server, defaults to "127.0.0.1".
        SERVER_PORT: Port number for the server, defaults to 8000.
        SERVER_LOG_LEVEL: Logging level for the server, defaults to "info".
        SERVER_RELOAD: Flag to enable auto-reload for development, defaults to False.
        SLOW_REQUEST_MS: Requests slower than this are logged at WARNING; 0
            disables the check. Defaults to 5000.
    """

    SERVER_HOST: str = "127.0.0.1"
    SERVER_PORT: int = 8000
    SERVER_LOG_LEVEL: str = "info"
    SERVER_RELOAD: bool = False
    SLOW_REQUEST_MS: float = Field(default=5000.0, ge=0)

    @field_validator("SERVER_LOG_LEVEL", mode="before")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validates that the log level is one of the allowed values.

        Args:
            v (str): The log level value to validate.

        Returns:
            str: The normalized (lowercase) log level.

        Raises:
            ValueError: If the log level is not one of the allowed values.
        """
        normalized = v.lower()
        if normalized not in ("debug", "info", "warning", "error", "critical"):
            raise ValueError(f"Invalid log level: {v}")
        return normalized


class PlannerSettings(BaseModel):
    """Settings for the grid-line planner.

    Attributes:
        waypoints: Number of grid lines n, defaults to 100.
        strict_segments: Require collision-free segments, defaults to True.
        penalty_mode: "soft" additive penalty or "hard" rejection.
        penalty_factor: Soft penalty as a multiple of the workspace diagonal.
        sweep_axis: "auto", "x" or "y".
        objective: "continuity" or "goal_only".
        segment_aware: Penalize blocked segments during the search; None
            follows strict_segments.
    """

    waypoints: int = Field(default=100, ge=1)
    strict_segments: bool = True
    penalty_mode: PenaltyMode = PenaltyMode.SOFT
    penalty_factor: float = Field(default=10.0, gt=0)
    sweep_axis: SweepAxis = SweepAxis.AUTO
    objective: Objective = Objective.CONTINUITY
    segment_aware: bool | None = None

    def options(self) -> PlannerOptions:
        """Planner options described by these settings."""
        return PlannerOptions(
            penalty_mode=self.penalty_mode,
            penalty_factor=self.penalty_factor,
            sweep_axis=self.sweep_axis,
            objective=self.objective,
            segment_aware=self.segment_aware,
        )


class GeometrySettings(BaseModel):
    """Settings for the visibility-graph oracle.

    Attributes:
        circle_sides: Sides of the polygon replacing a circle in the oracle.
    """

    circle_sides: int = Field(default=32, ge=3)


def config_path(base_dir: Path) -> Path:
    """Location of the TOML config, honoring ``SWARMPATH_CONFIG``."""
    override = os.environ.get(CONFIG_ENV_VAR)
    return Path(override) if override else base_dir / "config.toml"


class Settings(BaseSettings):
    """Application settings with strong typing and validation.

    Loads configuration from init arguments, environment variables (nested
    with ``__``, e.g. ``PSO__SWARM_SIZE``), config.toml and the .env file,
    in that priority order.
    """

    # Core paths
    BASE_DIR: Final[Path] = Path(__file__).resolve().parents[3]
    _dot_env_path: Final[Path] = BASE_DIR / ".env"

    # Pydantic configuration
    model_config = SettingsConfigDict(
        env_file=_dot_env_path,
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
    )

    app: AppSettings = Field(
        default_factory=lambda: AppSettings(),
        description="Server app configuration",
    )

    pso: PsoConfig = Field(
        default_factory=lambda: PsoConfig(),
        description="Swarm parameters",
    )

    planner: PlannerSettings = Field(
        default_factory=lambda: PlannerSettings(),
        description="Planner configuration",
    )

    geometry: GeometrySettings = Field(
        default_factory=lambda: GeometrySettings(),
        description="Geometry tolerances",
    )

    @property
    def cfg_toml_path(self) -> Path:
        return config_path(self.BASE_DIR)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...] | Callable[[], dict[str, Any]]:
        """Customize and prioritize configuration sources for settings.

        The priority of configuration sources is as follows:
        1. Initialization settings (highest priority)
        2. Environment variables
        3. TOML configuration file
        4. Dotenv file
        5. File secret settings (lowest priority)

        Args:
            settings_cls (type[BaseSettings]): The settings class being configured.
            init_settings (PydanticBaseSettingsSource): Passed during initialization.
            env_settings (PydanticBaseSettingsSource): Environment variable settings.
            dotenv_settings (PydanticBaseSettingsSource): .env file settings.
            file_secret_settings (PydanticBaseSettingsSource): File-based secrets.

        Returns:
            tuple[PydanticBaseSettingsSource, ...] | Callable[[], dict[str, Any]]:
                A tuple of settings sources or a callable that returns a configuration
                dictionary.
        """

        def load_toml_settings() -> dict[str, Any]:
            toml_path = config_path(cls.BASE_DIR)
            try:
                with toml_path.open(mode="rb") as f:
                    config = tomllib.load(f)
            except FileNotFoundError:
                logger.info(f"Config file not found at {toml_path}, using defaults")
                return {}
            except TOMLDecodeError as e:
                logger.error(f"Error decoding TOML config file: {e}")
                raise ConfigurationError(f"Malformed config file {toml_path}: {e}") from e
            logger.debug(f"Loaded configuration from file: {toml_path}")
            return config

        return (
            init_settings,
            env_settings,
            load_toml_settings,
            dotenv_settings,
            file_secret_settings,
        )
