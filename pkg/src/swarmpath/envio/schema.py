from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field


SCHEMA_VERSION = 1
"""Only schema version understood by the loader."""

Coordinates = tuple[float, float]
"""An ``[x, y]`` pair as written in environment documents."""


class DocumentModel(BaseModel):
    """Base model for environment documents: strict keys, finite numbers."""

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        allow_inf_nan=False,
    )


class BoundsDocument(DocumentModel):
    """Workspace rectangle.

    Attributes:
        xmin (float): Left edge in meters.
        ymin (float): Bottom edge in meters.
        xmax (float): Right edge in meters.
        ymax (float): Top edge in meters.
    """

    xmin: float
    ymin: float
    xmax: float
    ymax: float


class CircleDocument(DocumentModel):
    """Circular obstacle entry."""

    kind: Literal["circle"]
    center: Coordinates
    radius: float


class PolygonDocument(DocumentModel):
    """Convex polygon entry; vertices may be listed in either orientation."""

    kind: Literal["polygon"]
    vertices: list[Coordinates] = Field(min_length=3)


ObstacleDocument = Annotated[
    CircleDocument | PolygonDocument,
    Field(discriminator="kind"),
]


class EnvironmentDocument(DocumentModel):
    """On-disk environment file, schema version 1.

    Attributes:
        schema_version (int): Format version, must equal ``SCHEMA_VERSION``.
        bounds (BoundsDocument): Workspace rectangle.
        start (Coordinates): Start point SP.
        goal (Coordinates): Goal point GP.
        robot_radius (float): Robot disc radius; defaults to 0.1 m.
        safety_margin (float): Extra clearance; defaults to 0.2 m.
        obstacles (list[ObstacleDocument]): Raw obstacles.
    """

    schema_version: int
    bounds: BoundsDocument
    start: Coordinates
    goal: Coordinates
    robot_radius: float = Field(default=0.1, ge=0)
    safety_margin: float = Field(default=0.2, ge=0)
    obstacles: list[ObstacleDocument] = Field(default_factory=list)


class BundledEnvironment(BaseModel):
    """Summary of a bundled scenario.

    Attributes:
        id (int): Scenario id, 1 to 4.
        start (Coordinates): Start point.
        goal (Coordinates): Goal point.
        obstacle_count (int): Number of obstacles.
        kinds (list[str]): Distinct obstacle kinds, sorted.
    """

    id: int
    start: Coordinates
    goal: Coordinates
    obstacle_count: int
    kinds: list[str]
