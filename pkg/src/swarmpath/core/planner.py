"""Grid-line path planner.

The straight segment from start to goal is divided into ``n + 1`` equal
parts along a sweep axis. Waypoint ``i`` is searched on the ``i``-th line
perpendicular to that axis by a one-dimensional swarm run that minimizes the
distance from the previous waypoint plus the distance to the goal.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property
import math
import time

from loguru import logger
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from swarmpath.core.exceptions import GeometryError, GridError, WorkspaceError
from swarmpath.core.geometry import (
    EPSILON,
    BoolArray,
    FloatArray,
    Obstacle,
    Point2,
    contains_point,
    contains_points,
    distance,
    extent,
    inflate,
    segment_intersects,
    segments_intersect,
)
from swarmpath.core.pso import PsoConfig, SearchDomain, optimize


PLANNING_TOLERANCE = 100 * EPSILON
"""Clearance demanded by the waypoint search, above the verification tolerance."""


class SweepAxis(StrEnum):
    """Axis along which grid lines are stacked."""

    AUTO = "auto"
    X = "x"
    Y = "y"


class PenaltyMode(StrEnum):
    """How candidates inside inflated obstacles are scored."""

    SOFT = "soft"  # feasible value plus a large constant
    HARD = "hard"  # +inf


class Objective(StrEnum):
    """Per-waypoint objective."""

    CONTINUITY = "continuity"  # d(previous, c) + d(c, goal)
    GOAL_ONLY = "goal_only"  # d(c, goal)


class PlannerOptions(BaseModel):
    """Knobs of :func:`plan` that the reference method leaves open.

    Attributes:
        penalty_mode (PenaltyMode): Soft additive penalty or hard rejection.
        penalty_factor (float): Soft penalty as a multiple of the workspace
            diagonal.
        sweep_axis (SweepAxis): Grid orientation; ``auto`` picks the axis with
            the larger start-to-goal component.
        objective (Objective): Per-waypoint objective.
        segment_aware (bool | None): Also penalize candidates whose segment
            from the previous waypoint hits an obstacle. ``None`` follows
            ``strict_segments``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    penalty_mode: PenaltyMode = PenaltyMode.SOFT
    penalty_factor: float = Field(default=10.0, gt=0)
    sweep_axis: SweepAxis = SweepAxis.AUTO
    objective: Objective = Objective.CONTINUITY
    segment_aware: bool | None = None


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned workspace rectangle."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        values = (self.xmin, self.ymin, self.xmax, self.ymax)
        if not all(math.isfinite(v) for v in values):
            raise WorkspaceError("Bounds must be finite", field_path="bounds")
        if self.xmin >= self.xmax or self.ymin >= self.ymax:
            raise WorkspaceError(
                "Bounds need xmin < xmax and ymin < ymax",
                field_path="bounds",
            )

    def contains(self, p: Point2) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax

    def span(self, axis: SweepAxis) -> tuple[float, float]:
        """Interval covered along ``axis``."""
        if axis is SweepAxis.X:
            return (self.xmin, self.xmax)
        return (self.ymin, self.ymax)

    @property
    def diagonal(self) -> float:
        return math.hypot(self.xmax - self.xmin, self.ymax - self.ymin)


@dataclass(frozen=True)
class Workspace:
    """Planning problem: bounds, raw obstacles, endpoints and robot size.

    Obstacles are stored raw; :attr:`inflated_obstacles` grows them by
    ``robot_radius + safety_margin`` so the robot can be treated as a point.

    Raises:
        WorkspaceError: If an invariant fails; ``field_path`` names the field.
    """

    bounds: Bounds
    obstacles: tuple[Obstacle, ...]
    start: Point2
    goal: Point2
    robot_radius: float = 0.0
    safety_margin: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        for name in ("robot_radius", "safety_margin"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise WorkspaceError(
                    f"{name} must be a non-negative finite length",
                    field_path=name,
                )
        for name in ("start", "goal"):
            point = getattr(self, name)
            if not self.bounds.contains(point):
                raise WorkspaceError(f"{name} lies outside bounds", field_path=name)
        if self.start == self.goal:
            raise WorkspaceError("start and goal coincide", field_path="goal")
        for name in ("start", "goal"):
            point = getattr(self, name)
            for index, obstacle in enumerate(self.inflated_obstacles):
                if contains_point(obstacle, point):
                    raise WorkspaceError(
                        f"{name} lies inside inflated obstacle {index}",
                        field_path=name,
                    )

    @property
    def clearance(self) -> float:
        """Total inflation distance."""
        return self.robot_radius + self.safety_margin

    @cached_property
    def inflated_obstacles(self) -> tuple[Obstacle, ...]:
        if self.clearance <= 0:
            return self.obstacles
        return tuple(inflate(obstacle, self.clearance) for obstacle in self.obstacles)

    @property
    def diagonal(self) -> float:
        return self.bounds.diagonal


@dataclass(frozen=True)
class GridModel:
    """Perpendicular grid lines between start and goal.

    Attributes:
        n (int): Number of lines (one waypoint per line).
        spacing (float): Segment length ``d(SP, GP) / (n + 1)``.
        sweep_axis (SweepAxis): ``X`` or ``Y``; lines are perpendicular to it.
        line_coordinates (tuple[float, ...]): Fixed sweep coordinate of each
            line, strictly monotone from start towards goal.
        free_range (tuple[tuple[float, float], ...]): Searchable interval of
            the other coordinate on each line.
    """

    n: int
    spacing: float
    sweep_axis: SweepAxis
    line_coordinates: tuple[float, ...]
    free_range: tuple[tuple[float, float], ...]

    def point_on_line(self, index: int, free: float) -> Point2:
        """Point of line ``index`` at free coordinate ``free``."""
        fixed = self.line_coordinates[index]
        if self.sweep_axis is SweepAxis.X:
            return Point2(fixed, free)
        return Point2(free, fixed)

    def points_on_line(self, index: int, free: FloatArray) -> FloatArray:
        """Vectorized :meth:`point_on_line` over a 1-D array."""
        fixed = np.full_like(free, self.line_coordinates[index])
        if self.sweep_axis is SweepAxis.X:
            return np.column_stack((fixed, free))
        return np.column_stack((free, fixed))


@dataclass(frozen=True)
class Path:
    """Ordered waypoints ``[SP, wp_1, ..., wp_n, GP]``."""

    waypoints: tuple[Point2, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "waypoints", tuple(self.waypoints))
        if len(self.waypoints) < 2:
            raise GeometryError("A path needs at least two points")

    @property
    def interior(self) -> tuple[Point2, ...]:
        return self.waypoints[1:-1]

    def __len__(self) -> int:
        return len(self.waypoints)


@dataclass(frozen=True)
class Collision:
    """A waypoint or segment of a path that touches an inflated obstacle.

    ``index`` is the waypoint index, or the index of the segment's first
    waypoint.
    """

    kind: str
    index: int
    obstacle_index: int


@dataclass(frozen=True)
class PlanResult:
    """Planner output with diagnostics.

    Attributes:
        path (Path): Waypoints from start to goal.
        total_length (float): Sum of segment lengths in meters.
        per_waypoint_fitness (tuple[float, ...]): Final gbest fitness per line.
        iterations_per_waypoint (tuple[int, ...]): Swarm steps used per line.
        feasible (bool): No waypoint (and, when strict, no segment) collides.
        seed (int): Seed of the run.
        objective_value (float): Aggregate path objective, for reporting.
        collisions (tuple[Collision, ...]): Findings of the feasibility check.
        elapsed_ms (float): Wall-clock planning time.
    """

    path: Path
    total_length: float
    per_waypoint_fitness: tuple[float, ...]
    iterations_per_waypoint: tuple[int, ...]
    feasible: bool
    seed: int
    objective_value: float
    collisions: tuple[Collision, ...] = ()
    elapsed_ms: float = 0.0


def _sweep(p: Point2, axis: SweepAxis) -> float:
    return p.x if axis is SweepAxis.X else p.y


def _free(p: Point2, axis: SweepAxis) -> float:
    return p.y if axis is SweepAxis.X else p.x


def build_grid(
    start: Point2,
    goal: Point2,
    n: int,
    bounds: Bounds | None = None,
    axis: SweepAxis = SweepAxis.AUTO,
) -> GridModel:
    """Build the grid-line model between ``start`` and ``goal``.

    Without ``bounds`` each line's free range is centered on the midpoint of
    the endpoints' free coordinates and extends ``d(start, goal)`` either way.

    Args:
        start (Point2): Start point SP.
        goal (Point2): Goal point GP.
        n (int): Number of grid lines, at least 1.
        bounds (Bounds, optional): Workspace bounds giving the free range.
        axis (SweepAxis, optional): Forced sweep axis, or ``AUTO``.

    Returns:
        GridModel: The grid model.

    Raises:
        GridError: If the endpoints coincide, ``n < 1`` or the forced axis has
            no start-to-goal extent.
    """
    if start == goal:
        raise GridError("Start and goal coincide")
    if n < 1:
        raise GridError(f"Need at least one grid line, got {n}")

    if axis is SweepAxis.AUTO:
        dx, dy = abs(goal.x - start.x), abs(goal.y - start.y)
        axis = SweepAxis.X if dx >= dy else SweepAxis.Y
    origin, delta = _sweep(start, axis), _sweep(goal, axis) - _sweep(start, axis)
    if delta == 0:
        raise GridError(f"Start and goal share the same {axis.value} coordinate")

    length = distance(start, goal)
    step = delta / (n + 1)
    lines = tuple(origin + i * step for i in range(1, n + 1))

    other = SweepAxis.Y if axis is SweepAxis.X else SweepAxis.X
    if bounds is not None:
        interval = bounds.span(other)
    else:
        middle = (_free(start, axis) + _free(goal, axis)) / 2
        interval = (middle - length, middle + length)

    return GridModel(
        n=n,
        spacing=length / (n + 1),
        sweep_axis=axis,
        line_coordinates=lines,
        free_range=tuple(interval for _ in lines),
    )


def path_length(path: Path) -> float:
    """Sum of consecutive Euclidean distances along ``path``."""
    points = path.waypoints
    return math.fsum(distance(a, b) for a, b in zip(points, points[1:], strict=False))


def whole_path_objective(path: Path, goal: Point2) -> float:
    """Aggregate objective of a planned path, for reporting.

    Sum of the distances ``wp_{i-1} -> wp_i`` over the interior waypoints
    (``wp_0`` is the start) plus the root of the summed squared distances of
    the interior waypoints to ``goal``.
    """
    points = path.waypoints[:-1]
    if len(points) < 2:
        return 0.0
    beta = math.fsum(
        distance(a, b) for a, b in zip(points, points[1:], strict=False)
    )
    goal_term = math.sqrt(
        math.fsum((p.x - goal.x) ** 2 + (p.y - goal.y) ** 2 for p in points[1:]),
    )
    return beta + goal_term


def penalty_value(workspace: Workspace, options: PlannerOptions) -> float:
    """Fitness added to candidates inside inflated obstacles."""
    if options.penalty_mode is PenaltyMode.HARD:
        return math.inf
    return options.penalty_factor * workspace.diagonal


def waypoint_fitness(
    candidate: Point2,
    previous: Point2,
    goal: Point2,
    workspace: Workspace,
    options: PlannerOptions | None = None,
    eps: float = PLANNING_TOLERANCE,
) -> float:
    """Score one candidate waypoint.

    Uses the same scorer as :func:`plan` in point mode (segments not
    checked), so a candidate scores here exactly what the swarm sees.

    Args:
        candidate (Point2): Candidate on its grid line.
        previous (Point2): Previous waypoint (the start for the first line).
        goal (Point2): Goal point.
        workspace (Workspace): Workspace with the obstacles.
        options (PlannerOptions, optional): Objective and penalty settings.
        eps (float, optional): Clearance below which a candidate counts as
            inside an inflated obstacle.

    Returns:
        float: ``d(previous, candidate) + d(candidate, goal)``, plus the
        penalty if the candidate lies inside an inflated obstacle.
    """
    options = options or PlannerOptions()
    scorer = CandidateScorer(
        previous=previous,
        goal=goal,
        objective=options.objective,
        penalty=penalty_value(workspace, options),
        point_obstacles=workspace.inflated_obstacles,
        eps=eps,
    )
    return float(scorer(candidate.as_array()[None, :])[0])


def _overlapping(
    obstacles: Sequence[Obstacle],
    axis: SweepAxis,
    lo: float,
    hi: float,
) -> tuple[Obstacle, ...]:
    """Obstacles whose sweep-axis extent meets ``[lo, hi]``."""
    # Widened by the scorer tolerance so the prefilter never drops a hit.
    lo, hi = min(lo, hi) - PLANNING_TOLERANCE, max(lo, hi) + PLANNING_TOLERANCE
    selected = []
    for obstacle in obstacles:
        xmin, ymin, xmax, ymax = extent(obstacle)
        first, last = (xmin, xmax) if axis is SweepAxis.X else (ymin, ymax)
        if first <= hi and last >= lo:
            selected.append(obstacle)
    return tuple(selected)


@dataclass(frozen=True)
class CandidateScorer:
    """Batched fitness of candidate waypoints given the previous one.

    Candidates closer than ``eps`` to ``point_obstacles``, or whose segment
    from ``previous`` (or, for the last line, to ``goal``) comes that close to
    ``segment_obstacles`` / ``goal_obstacles``, get ``penalty`` added.
    """

    previous: Point2
    goal: Point2
    objective: Objective
    penalty: float
    point_obstacles: tuple[Obstacle, ...] = ()
    segment_obstacles: tuple[Obstacle, ...] = ()
    goal_obstacles: tuple[Obstacle, ...] = ()
    eps: float = PLANNING_TOLERANCE

    def blocked(self, points: FloatArray) -> BoolArray:
        mask = np.zeros(points.shape[0], dtype=bool)
        for obstacle in self.point_obstacles:
            mask |= contains_points(obstacle, points, self.eps)
        for obstacle in self.segment_obstacles:
            mask |= segments_intersect(obstacle, self.previous, points, self.eps)
        for obstacle in self.goal_obstacles:
            mask |= segments_intersect(obstacle, self.goal, points, self.eps)
        return mask

    def __call__(self, points: FloatArray) -> FloatArray:
        goal = self.goal.as_array()
        value = np.hypot(points[:, 0] - goal[0], points[:, 1] - goal[1])
        if self.objective is Objective.CONTINUITY:
            prev = self.previous.as_array()
            value = value + np.hypot(points[:, 0] - prev[0], points[:, 1] - prev[1])
        return np.where(self.blocked(points), value + self.penalty, value)


@dataclass(frozen=True)
class _LineObjective:
    """Scorer restricted to the free coordinate of one grid line."""

    grid: GridModel
    index: int
    scorer: CandidateScorer

    def __call__(self, positions: FloatArray) -> FloatArray:
        return self.scorer(self.grid.points_on_line(self.index, positions[:, 0]))


def verify_path(
    path: Path,
    obstacles: Sequence[Obstacle],
    strict_segments: bool = True,
) -> tuple[Collision, ...]:
    """Re-check a path against obstacles from scratch.

    Args:
        path (Path): Path to check.
        obstacles (Sequence[Obstacle]): Obstacles, normally the inflated ones.
        strict_segments (bool, optional): Also check connecting segments.

    Returns:
        tuple[Collision, ...]: Every collision found, empty for a clean path.
    """
    found = [
        Collision("waypoint", i, k)
        for i, point in enumerate(path.waypoints)
        for k, obstacle in enumerate(obstacles)
        if contains_point(obstacle, point)
    ]
    if strict_segments:
        points = path.waypoints
        found.extend(
            Collision("segment", i, k)
            for i, (a, b) in enumerate(zip(points, points[1:], strict=False))
            for k, obstacle in enumerate(obstacles)
            if segment_intersects(obstacle, a, b)
        )
    return tuple(found)


def waypoint_seed(seed: int, index: int) -> int:
    """Derive the swarm seed of grid line ``index`` from the run seed."""
    sequence = np.random.SeedSequence([seed, index])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def plan(
    workspace: Workspace,
    pso_config: PsoConfig,
    n: int = 100,
    strict_segments: bool = True,
    options: PlannerOptions | None = None,
) -> PlanResult:
    """Plan a path from start to goal.

    Builds the grid over the inflated workspace and optimizes the waypoints
    one line at a time, each with the previous waypoint fixed. An infeasible
    outcome is reported through ``feasible`` rather than raised.

    Args:
        workspace (Workspace): Planning problem.
        pso_config (PsoConfig): Swarm settings; ``rng_seed`` seeds the run.
        n (int, optional): Number of waypoints.
        strict_segments (bool, optional): Require collision-free segments.
        options (PlannerOptions, optional): Remaining planner knobs.

    Returns:
        PlanResult: The path and its diagnostics.
    """
    options = options or PlannerOptions()
    segment_aware = (
        strict_segments if options.segment_aware is None else options.segment_aware
    )
    started = time.perf_counter()

    grid = build_grid(
        workspace.start,
        workspace.goal,
        n,
        workspace.bounds,
        options.sweep_axis,
    )
    axis = grid.sweep_axis
    inflated = workspace.inflated_obstacles
    penalty = penalty_value(workspace, options)

    previous = workspace.start
    waypoints: list[Point2] = []
    fitness_values: list[float] = []
    iterations: list[int] = []
    for index, coordinate in enumerate(grid.line_coordinates):
        lo, hi = grid.free_range[index]
        band = _overlapping(inflated, axis, _sweep(previous, axis), coordinate)
        last = index == grid.n - 1
        scorer = CandidateScorer(
            previous=previous,
            goal=workspace.goal,
            objective=options.objective,
            penalty=penalty,
            point_obstacles=() if segment_aware else band,
            segment_obstacles=band if segment_aware else (),
            goal_obstacles=(
                _overlapping(inflated, axis, coordinate, _sweep(workspace.goal, axis))
                if segment_aware and last
                else ()
            ),
        )
        objective = _LineObjective(grid, index, scorer)
        config = pso_config.model_copy(
            update={"rng_seed": waypoint_seed(pso_config.rng_seed, index)},
        )
        result = optimize(config, SearchDomain.interval(lo, hi), objective)
        waypoint = grid.point_on_line(index, float(result.gbest_position[0]))

        if result.gbest_fitness >= penalty:
            logger.warning(f"Waypoint {index + 1} ended on a penalized candidate")
        logger.debug(
            f"Waypoint {index + 1}/{grid.n}: ({waypoint.x:.4f}, {waypoint.y:.4f}) "
            f"fitness={result.gbest_fitness:.6f} iterations={result.iterations_used}",
        )
        waypoints.append(waypoint)
        fitness_values.append(result.gbest_fitness)
        iterations.append(result.iterations_used)
        previous = waypoint

    path = Path((workspace.start, *waypoints, workspace.goal))
    collisions = verify_path(path, inflated, strict_segments)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    outcome = PlanResult(
        path=path,
        total_length=path_length(path),
        per_waypoint_fitness=tuple(fitness_values),
        iterations_per_waypoint=tuple(iterations),
        feasible=not collisions,
        seed=pso_config.rng_seed,
        objective_value=whole_path_objective(path, workspace.goal),
        collisions=collisions,
        elapsed_ms=elapsed_ms,
    )
    logger.info(
        f"Planned {grid.n} waypoints: feasible={outcome.feasible} "
        f"length={outcome.total_length:.4f} elapsed={elapsed_ms:.0f}ms",
    )
    return outcome
