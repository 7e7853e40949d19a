from pydantic import BaseModel, ConfigDict, Field, model_validator

from swarmpath.core.planner import PenaltyMode
from swarmpath.envio.schema import Coordinates, EnvironmentDocument
from swarmpath.services.planning import RunReport


# Per-request ceilings; each is ten times the reference setting.
MAX_SWARM_SIZE = 5_000
MAX_ITERATIONS = 1_000
MAX_WAYPOINTS = 1_000


class EnvironmentSource(BaseModel):
    """Either an inline environment document or a bundled scenario id.

    Attributes:
        environment (EnvironmentDocument | None): Inline document.
        bundled (int | None): Bundled scenario id.
    """

    model_config = ConfigDict(extra="forbid")

    environment: EnvironmentDocument | None = None
    bundled: int | None = None

    @model_validator(mode="after")
    def check_exactly_one(self) -> "EnvironmentSource":
        """Require exactly one of ``environment`` and ``bundled``.

        Raises:
            ValueError: If both or neither are given.
        """
        if (self.environment is None) == (self.bundled is None):
            raise ValueError("Provide exactly one of 'environment' and 'bundled'")
        return self


class PsoOverrides(BaseModel):
    """Swarm parameters overriding the configured defaults."""

    model_config = ConfigDict(extra="forbid")

    swarm_size: int | None = Field(default=None, le=MAX_SWARM_SIZE)
    max_iterations: int | None = Field(default=None, le=MAX_ITERATIONS)
    omega_max: float | None = None
    omega_min: float | None = None
    c1: float | None = None
    c2: float | None = None
    v_max: float | None = None
    v_min: float | None = None
    convergence_epsilon: float | None = None


class PlanRequest(EnvironmentSource):
    """Body of ``POST /plans``.

    Attributes:
        seed (int): Run seed, unsigned 64-bit.
        pso (PsoOverrides): Swarm parameter overrides.
        waypoints (int | None): Number of grid lines; configured default if None.
        strict_segments (bool | None): Segment checking; configured default if None.
        penalty_mode (PenaltyMode | None): Penalty mode; configured default if None.
        compare_oracle (bool): Also compute the oracle length.
    """

    seed: int = Field(default=0, ge=0, lt=2**64)
    pso: PsoOverrides = Field(default_factory=PsoOverrides)
    waypoints: int | None = Field(default=None, ge=1, le=MAX_WAYPOINTS)
    strict_segments: bool | None = None
    penalty_mode: PenaltyMode | None = None
    compare_oracle: bool = False


class PlanResponse(BaseModel):
    """Report and waypoints of a planning run."""

    report: RunReport
    waypoints: list[Coordinates]


class OracleResponse(BaseModel):
    """Shortest collision-free path found on the visibility graph."""

    length: float
    waypoints: list[Coordinates]
