import math

import numpy as np
import pytest

from swarmpath.core.exceptions import GridError, WorkspaceError
from swarmpath.core.geometry import EPSILON, Circle, ConvexPolygon, Point2, contains_point
from swarmpath.core.planner import (
    Bounds,
    CandidateScorer,
    Collision,
    Objective,
    Path,
    PenaltyMode,
    PlannerOptions,
    SweepAxis,
    Workspace,
    build_grid,
    path_length,
    penalty_value,
    verify_path,
    waypoint_fitness,
    waypoint_seed,
    whole_path_objective,
)
from swarmpath.core.planner import _LineObjective


class TestBuildGrid:
    def test_lines_split_the_dominant_axis(self):
        """n lines at equal steps along x for a horizontal problem."""
        grid = build_grid(Point2(0, 0), Point2(10, 0), 9)
        assert grid.sweep_axis is SweepAxis.X
        assert grid.line_coordinates == tuple(float(i) for i in range(1, 10))
        assert grid.spacing == 1.0

    def test_auto_picks_y_for_tall_problems(self):
        """The larger start-to-goal component decides the axis."""
        start, goal = Point2(0.0, 0.0), Point2(3.5, 9.0)
        grid = build_grid(start, goal, 100)
        assert grid.sweep_axis is SweepAxis.Y
        assert len(grid.line_coordinates) == 100
        assert grid.spacing == pytest.approx(math.hypot(3.5, 9.0) / 101)
        assert all(
            a < b for a, b in zip(grid.line_coordinates, grid.line_coordinates[1:])
        )

    def test_lines_run_from_start_towards_goal(self):
        """A goal left of the start gives decreasing coordinates."""
        grid = build_grid(Point2(10, 0), Point2(0, 1), 4)
        assert grid.line_coordinates == (8.0, 6.0, 4.0, 2.0)

    def test_free_range_follows_bounds(self):
        """With bounds every line spans the full perpendicular extent."""
        grid = build_grid(Point2(0, 0), Point2(10, 0), 3, Bounds(-1, -5, 11, 5))
        assert grid.free_range == ((-5.0, 5.0),) * 3

    def test_free_range_without_bounds(self):
        """Without bounds the range is the midpoint plus or minus d(SP, GP)."""
        grid = build_grid(Point2(0, 0), Point2(10, 0), 1)
        assert grid.free_range == ((-10.0, 10.0),)

    def test_point_on_line(self):
        """Free coordinates map onto the line's fixed coordinate."""
        grid = build_grid(Point2(0, 0), Point2(10, 0), 9)
        assert grid.point_on_line(0, 2.5) == Point2(1.0, 2.5)
        tall = build_grid(Point2(0, 0), Point2(0, 10), 9)
        assert tall.point_on_line(4, -1.0) == Point2(-1.0, 5.0)

    @pytest.mark.parametrize(
        ("start", "goal", "n", "axis"),
        [
            ((0, 0), (0, 0), 5, SweepAxis.AUTO),
            ((0, 0), (5, 5), 0, SweepAxis.AUTO),
            ((0, 0), (0, 5), 3, SweepAxis.X),
        ],
        ids=["coincident", "no-lines", "flat-forced-axis"],
    )
    def test_rejects_degenerate_requests(self, start, goal, n, axis):
        """Impossible grids raise GridError."""
        with pytest.raises(GridError):
            build_grid(Point2(*start), Point2(*goal), n, axis=axis)


class TestWorkspace:
    def test_inflation_uses_radius_plus_margin(self):
        """Circles grow by robot_radius + safety_margin."""
        workspace = Workspace(
            bounds=Bounds(-1, -1, 10, 10),
            obstacles=(Circle(Point2(5, 5), 1.0),),
            start=Point2(0, 0),
            goal=Point2(9, 9),
            robot_radius=0.1,
            safety_margin=0.2,
        )
        assert workspace.clearance == pytest.approx(0.3)
        (inflated,) = workspace.inflated_obstacles
        assert inflated.radius == pytest.approx(1.3)

    def test_zero_clearance_keeps_raw_obstacles(self, unit_square):
        """No inflation without a robot radius or margin."""
        workspace = Workspace(
            bounds=Bounds(-1, -1, 10, 10),
            obstacles=(unit_square,),
            start=Point2(5, 5),
            goal=Point2(9, 9),
        )
        assert workspace.inflated_obstacles == (unit_square,)

    @pytest.mark.parametrize(
        ("start", "goal", "radius", "field_path"),
        [
            ((0.0, 0.0), (0.0, 0.0), 0.0, "goal"),
            ((20.0, 0.0), (5.0, 5.0), 0.0, "start"),
            ((0.0, 0.0), (5.0, 5.0), -0.1, "robot_radius"),
            ((0.35, 0.0), (5.0, 5.0), 0.1, "start"),
            ((0.0, 0.0), (0.55, 0.0), 0.1, "goal"),
        ],
        ids=["coincident", "out-of-bounds", "negative-radius", "start-blocked", "goal-blocked"],
    )
    def test_invariants(self, start, goal, radius, field_path):
        """Invalid workspaces name the offending field."""
        with pytest.raises(WorkspaceError) as excinfo:
            Workspace(
                bounds=Bounds(-1, -1, 10, 10),
                obstacles=(Circle(Point2(0.5, 0.0), 0.1),),
                start=Point2(*start),
                goal=Point2(*goal),
                robot_radius=radius,
            )
        assert excinfo.value.field_path == field_path

    def test_bounds_must_be_ordered(self):
        """Bounds need xmin < xmax and ymin < ymax."""
        with pytest.raises(WorkspaceError):
            Bounds(1, 0, 0, 1)


class TestObjectives:
    def test_path_length(self):
        """Sum of the segment lengths."""
        path = Path((Point2(0, 0), Point2(3, 4), Point2(3, 8)))
        assert path_length(path) == 9.0

    def test_whole_path_objective(self):
        """Continuity sum plus the root of the squared goal distances."""
        goal = Point2(10, 4)
        path = Path((Point2(0, 0), Point2(3, 4), Point2(6, 4), goal))
        assert whole_path_objective(path, goal) == pytest.approx(8.0 + math.sqrt(65))

    def test_free_candidate_scores_its_two_distances(self, empty_workspace):
        """d(previous, candidate) + d(candidate, goal) off obstacles."""
        value = waypoint_fitness(
            Point2(5, 3),
            Point2(0, 0),
            empty_workspace.goal,
            empty_workspace,
        )
        assert value == pytest.approx(2 * math.sqrt(34))

    def test_goal_only_objective(self, empty_workspace):
        """The goal-only variant ignores the previous waypoint."""
        options = PlannerOptions(objective=Objective.GOAL_ONLY)
        value = waypoint_fitness(
            Point2(5, 3),
            Point2(0, 0),
            empty_workspace.goal,
            empty_workspace,
            options,
        )
        assert value == pytest.approx(math.sqrt(34))

    def test_soft_and_hard_penalties(self, blocked_workspace):
        """Blocked candidates get the diagonal multiple, or infinity."""
        inside, previous = Point2(5, 0), Point2(0, 0)
        goal = blocked_workspace.goal
        base = math.hypot(5, 0) + math.hypot(5, 0.2)
        penalty = penalty_value(blocked_workspace, PlannerOptions())
        assert penalty == pytest.approx(10 * math.hypot(12, 10))
        soft = waypoint_fitness(inside, previous, goal, blocked_workspace)
        assert soft == pytest.approx(base + penalty)
        hard = waypoint_fitness(
            inside,
            previous,
            goal,
            blocked_workspace,
            PlannerOptions(penalty_mode=PenaltyMode.HARD),
        )
        assert hard == math.inf

    def test_planner_scores_candidates_like_waypoint_fitness(self):
        """The line objective the swarm minimizes equals waypoint_fitness."""
        square = ConvexPolygon.of([(4, -1), (6, -1), (6, 1), (4, 1)])
        workspace = Workspace(
            bounds=Bounds(-1.0, -5.0, 11.0, 5.0),
            obstacles=(square,),
            start=Point2(0.0, 0.0),
            goal=Point2(10.0, 0.0),
        )
        grid = build_grid(workspace.start, workspace.goal, 4, workspace.bounds)
        scorer = CandidateScorer(
            previous=workspace.start,
            goal=workspace.goal,
            objective=Objective.CONTINUITY,
            penalty=penalty_value(workspace, PlannerOptions()),
            point_obstacles=workspace.inflated_obstacles,
        )
        free = np.append(np.linspace(-3.0, 3.0, 61), 1.0 + 5e-8)
        batch = _LineObjective(grid, 1, scorer)(free[:, None])
        single = [
            waypoint_fitness(
                grid.point_on_line(1, float(y)),
                workspace.start,
                workspace.goal,
                workspace,
            )
            for y in free
        ]
        assert batch.tolist() == pytest.approx(single, rel=1e-12)
        assert sum(value > scorer.penalty for value in single) > 0

    def test_boundary_clearance_is_penalized(self):
        """Candidates within the planning tolerance of an edge count as blocked."""
        square = ConvexPolygon.of([(4, -1), (6, -1), (6, 1), (4, 1)])
        workspace = Workspace(
            bounds=Bounds(-1.0, -5.0, 11.0, 5.0),
            obstacles=(square,),
            start=Point2(0.0, 0.0),
            goal=Point2(10.0, 0.0),
        )
        grazing = Point2(4.0, 1.0 + 5e-8)
        assert not contains_point(square, grazing)
        penalty = penalty_value(workspace, PlannerOptions())
        previous, goal = workspace.start, workspace.goal
        assert waypoint_fitness(grazing, previous, goal, workspace) > penalty
        relaxed = waypoint_fitness(grazing, previous, goal, workspace, eps=EPSILON)
        assert relaxed < penalty


class TestVerifyPath:
    def test_reports_waypoint_and_segment_collisions(self, blocked_workspace):
        """A path through the diamond collides at the waypoint and both segments."""
        path = Path((Point2(0, 0), Point2(5, 0), blocked_workspace.goal))
        obstacles = blocked_workspace.inflated_obstacles
        assert verify_path(path, obstacles) == (
            Collision("waypoint", 1, 0),
            Collision("segment", 0, 0),
            Collision("segment", 1, 0),
        )
        assert verify_path(path, obstacles, strict_segments=False) == (
            Collision("waypoint", 1, 0),
        )

    def test_detour_is_clean(self, blocked_workspace):
        """Going over the diamond avoids it."""
        path = Path((Point2(0, 0), Point2(5, 3), blocked_workspace.goal))
        assert verify_path(path, blocked_workspace.inflated_obstacles) == ()

    def test_segment_only_collision(self, blocked_workspace):
        """Waypoints outside an obstacle can still be joined through it."""
        path = Path((Point2(0, 0), blocked_workspace.goal))
        obstacles = blocked_workspace.inflated_obstacles
        assert verify_path(path, obstacles) == (Collision("segment", 0, 0),)
        assert verify_path(path, obstacles, strict_segments=False) == ()


class TestWaypointSeed:
    def test_is_deterministic_and_index_dependent(self):
        """Same inputs give the same seed; different lines differ."""
        assert waypoint_seed(7, 3) == waypoint_seed(7, 3)
        seeds = {waypoint_seed(7, i) for i in range(100)}
        assert len(seeds) == 100
        assert waypoint_seed(7, 0) != waypoint_seed(8, 0)
        assert all(0 <= s < 2**64 for s in seeds)
