"""Writers for the path CSV, JSON reports and SVG renderings."""

import csv
import io
from pathlib import Path as FilePath

import matplotlib
from matplotlib.figure import Figure
from matplotlib.patches import Circle as CirclePatch
from matplotlib.patches import Polygon as PolygonPatch
from matplotlib.patches import Rectangle
import orjson
from pydantic import BaseModel

from swarmpath.core.exceptions import EnvironmentFileError
from swarmpath.core.geometry import Circle, Obstacle, Point2
from swarmpath.core.planner import Path, Workspace


CSV_HEADER = ("x", "y")

OBSTACLE_COLOR = "#7f7f7f"
INFLATED_COLOR = "#404040"
PATH_COLOR = "#d62728"


def format_csv(path: Path) -> str:
    """Render waypoints as CSV text with an ``x,y`` header."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p in path.waypoints:
        writer.writerow((repr(p.x), repr(p.y)))
    return buffer.getvalue()


def write_csv(path: Path, destination: FilePath) -> None:
    """Write waypoints to ``destination``, one row per waypoint in path order."""
    destination.write_text(format_csv(path), encoding="utf-8")


def read_csv(source: FilePath) -> Path:
    """Read a path written by :func:`write_csv`.

    Raises:
        EnvironmentFileError: If the header or a row is malformed.
    """
    with source.open(newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise EnvironmentFileError(f"{source}: expected header x,y")
    try:
        waypoints = [Point2(float(x), float(y)) for x, y in rows[1:]]
    except ValueError as e:
        raise EnvironmentFileError(f"{source}: malformed row: {e}") from e
    return Path(tuple(waypoints))


def dump_json(report: BaseModel) -> bytes:
    """Serialize a report with sorted keys and two-space indentation."""
    return orjson.dumps(
        report.model_dump(mode="json"),
        option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE,
    )


def write_json(report: BaseModel, destination: FilePath) -> None:
    """Write a report to ``destination`` as deterministic JSON."""
    destination.write_bytes(dump_json(report))


def _patch(obstacle: Obstacle, **style: object) -> CirclePatch | PolygonPatch:
    if isinstance(obstacle, Circle):
        return CirclePatch(obstacle.center.as_tuple(), obstacle.radius, **style)
    return PolygonPatch(
        [v.as_tuple() for v in obstacle.vertices],
        closed=True,
        **style,
    )


def render_svg(workspace: Workspace, path: Path | None = None) -> str:
    """Draw the workspace and, optionally, a path as an SVG document.

    Bounds are outlined, raw obstacles filled, inflated obstacles dashed and
    the path drawn as a red polyline from start to goal.

    Args:
        workspace (Workspace): Scene to draw.
        path (Path, optional): Path to overlay.

    Returns:
        str: The SVG document.
    """
    bounds = workspace.bounds
    figure = Figure(figsize=(6, 6))
    ax = figure.add_subplot()
    ax.set_aspect("equal")
    ax.set_xlim(bounds.xmin, bounds.xmax)
    ax.set_ylim(bounds.ymin, bounds.ymax)
    ax.add_patch(
        Rectangle(
            (bounds.xmin, bounds.ymin),
            bounds.xmax - bounds.xmin,
            bounds.ymax - bounds.ymin,
            fill=False,
            edgecolor="black",
            linewidth=1.5,
        ),
    )

    for obstacle in workspace.obstacles:
        ax.add_patch(_patch(obstacle, facecolor=OBSTACLE_COLOR, edgecolor="none"))
    if workspace.clearance > 0:
        for inflated in workspace.inflated_obstacles:
            ax.add_patch(
                _patch(
                    inflated,
                    fill=False,
                    edgecolor=INFLATED_COLOR,
                    linestyle="--",
                    linewidth=0.8,
                ),
            )

    if path is not None:
        ax.plot(
            [p.x for p in path.waypoints],
            [p.y for p in path.waypoints],
            color=PATH_COLOR,
            linewidth=1.5,
        )
    ax.plot(*workspace.start.as_tuple(), marker="o", color="green")
    ax.plot(*workspace.goal.as_tuple(), marker="*", color="blue", markersize=10)

    buffer = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "swarmpath"}):
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def write_svg(
    workspace: Workspace,
    destination: FilePath,
    path: Path | None = None,
) -> None:
    """Render the workspace and path to ``destination``."""
    destination.write_text(render_svg(workspace, path), encoding="utf-8")
