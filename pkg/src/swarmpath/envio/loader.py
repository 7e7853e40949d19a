"""Load, validate and serialize environment documents."""

from collections.abc import Sequence
from functools import lru_cache
from importlib.resources import files
from pathlib import Path

from loguru import logger
import orjson
from pydantic import ValidationError

from swarmpath.core.exceptions import (
    EnvironmentParseError,
    EnvironmentValidationError,
    GeometryError,
    SchemaVersionError,
    UnknownEnvironmentError,
    WorkspaceError,
)
from swarmpath.core.geometry import Circle, ConvexPolygon, Obstacle, Point2, orient_ccw
from swarmpath.core.planner import Bounds, Workspace

from .schema import (
    SCHEMA_VERSION,
    BoundsDocument,
    BundledEnvironment,
    CircleDocument,
    EnvironmentDocument,
    ObstacleDocument,
    PolygonDocument,
)


BUNDLED_IDS: tuple[int, ...] = (1, 2, 3, 4)

_UNION_TAGS = frozenset({"circle", "polygon"})


def _field_path(location: Sequence[int | str]) -> str:
    # Discriminated unions add the tag to the error location; drop it.
    return ".".join(str(part) for part in location if part not in _UNION_TAGS)


def _parse(document: str | bytes) -> EnvironmentDocument:
    try:
        data = orjson.loads(document)
    except orjson.JSONDecodeError as e:
        raise EnvironmentParseError(f"Malformed JSON: {e}") from e
    if not isinstance(data, dict):
        raise EnvironmentValidationError("Document must be a JSON object")

    version = data.get("schema_version")
    if isinstance(version, int) and not isinstance(version, bool):
        if version != SCHEMA_VERSION:
            raise SchemaVersionError(
                f"Unsupported schema version {version}, expected {SCHEMA_VERSION}",
                field_path="schema_version",
            )

    try:
        return EnvironmentDocument.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        raise EnvironmentValidationError(
            error["msg"],
            field_path=_field_path(error["loc"]),
        ) from e


def _obstacle(entry: ObstacleDocument, index: int) -> Obstacle:
    try:
        match entry:
            case CircleDocument(center=center, radius=radius):
                return Circle(Point2.of(center), radius)
            case PolygonDocument(vertices=vertices):
                return ConvexPolygon(orient_ccw([Point2.of(v) for v in vertices]))
    except GeometryError as e:
        key = "radius" if isinstance(entry, CircleDocument) else "vertices"
        raise EnvironmentValidationError(
            e.detail,
            field_path=f"obstacles.{index}.{key}",
        ) from e
    raise EnvironmentValidationError(
        "Unknown obstacle kind",
        field_path=f"obstacles.{index}.kind",
    )


def to_workspace(document: EnvironmentDocument) -> Workspace:
    """Convert a validated document into a workspace.

    Polygon vertices are reordered counter-clockwise when needed.

    Args:
        document (EnvironmentDocument): Schema-valid document.

    Returns:
        Workspace: The workspace, with every invariant checked.

    Raises:
        SchemaVersionError: If ``schema_version`` is not supported.
        EnvironmentValidationError: If a shape or workspace invariant fails.
    """
    # Coerced values such as 2.0 or "2" only show up after validation.
    if document.schema_version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"Unsupported schema version {document.schema_version}, "
            f"expected {SCHEMA_VERSION}",
            field_path="schema_version",
        )
    obstacles = tuple(
        _obstacle(entry, index) for index, entry in enumerate(document.obstacles)
    )
    try:
        return Workspace(
            bounds=Bounds(**document.bounds.model_dump()),
            obstacles=obstacles,
            start=Point2.of(document.start),
            goal=Point2.of(document.goal),
            robot_radius=document.robot_radius,
            safety_margin=document.safety_margin,
        )
    except WorkspaceError as e:
        raise EnvironmentValidationError(e.detail, field_path=e.field_path) from e
    except GeometryError as e:
        raise EnvironmentValidationError(e.detail, field_path="obstacles") from e


def load_environment(document: str | bytes, source: str = "<document>") -> Workspace:
    """Parse and validate an environment document.

    Args:
        document (str | bytes): UTF-8 JSON text.
        source (str, optional): Where the document came from, for logging.

    Returns:
        Workspace: The validated workspace.

    Raises:
        EnvironmentParseError: If the text is not valid JSON.
        SchemaVersionError: If ``schema_version`` is not supported.
        EnvironmentValidationError: If a field is missing, unknown or breaks an
            invariant; ``field_path`` names it.
    """
    workspace = to_workspace(_parse(document))
    logger.info(
        f"Loaded environment from {source}: {len(workspace.obstacles)} obstacles",
    )
    return workspace


def load_environment_file(path: Path) -> Workspace:
    """Load an environment document from disk.

    Raises:
        OSError: If the file cannot be read.
    """
    return load_environment(path.read_bytes(), source=str(path))


def environment_document(workspace: Workspace) -> EnvironmentDocument:
    """Describe a workspace as a schema document."""
    obstacles: list[ObstacleDocument] = []
    for obstacle in workspace.obstacles:
        if isinstance(obstacle, Circle):
            obstacles.append(
                CircleDocument(
                    kind="circle",
                    center=obstacle.center.as_tuple(),
                    radius=obstacle.radius,
                ),
            )
        else:
            obstacles.append(
                PolygonDocument(
                    kind="polygon",
                    vertices=[v.as_tuple() for v in obstacle.vertices],
                ),
            )
    bounds = workspace.bounds
    return EnvironmentDocument(
        schema_version=SCHEMA_VERSION,
        bounds=BoundsDocument(
            xmin=bounds.xmin,
            ymin=bounds.ymin,
            xmax=bounds.xmax,
            ymax=bounds.ymax,
        ),
        start=workspace.start.as_tuple(),
        goal=workspace.goal.as_tuple(),
        robot_radius=workspace.robot_radius,
        safety_margin=workspace.safety_margin,
        obstacles=obstacles,
    )


def dump_environment(workspace: Workspace) -> str:
    """Serialize a workspace to the canonical JSON document."""
    payload = environment_document(workspace).model_dump(mode="json")
    return orjson.dumps(payload, option=orjson.OPT_INDENT_2).decode("utf-8")


@lru_cache
def bundled_environment(env_id: int) -> Workspace:
    """Load one of the bundled scenarios.

    The obstacle layouts are approximate reconstructions; only the start and
    goal points and the obstacle counts are fixed.

    Args:
        env_id (int): Scenario id, 1 to 4.

    Returns:
        Workspace: The scenario.

    Raises:
        UnknownEnvironmentError: If ``env_id`` is not a bundled id.
    """
    if env_id not in BUNDLED_IDS:
        raise UnknownEnvironmentError(
            f"No bundled environment {env_id}, expected one of {list(BUNDLED_IDS)}",
        )
    resource = files("swarmpath.scenarios").joinpath(f"env{env_id}.json")
    return load_environment(resource.read_bytes(), source=f"bundled:{env_id}")


def list_bundled() -> list[BundledEnvironment]:
    """Summaries of every bundled scenario, in id order."""
    summaries = []
    for env_id in BUNDLED_IDS:
        workspace = bundled_environment(env_id)
        kinds = {
            "circle" if isinstance(o, Circle) else "polygon"
            for o in workspace.obstacles
        }
        summaries.append(
            BundledEnvironment(
                id=env_id,
                start=workspace.start.as_tuple(),
                goal=workspace.goal.as_tuple(),
                obstacle_count=len(workspace.obstacles),
                kinds=sorted(kinds),
            ),
        )
    return summaries
