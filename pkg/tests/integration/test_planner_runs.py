import math

import pytest

from swarmpath.core.geometry import ConvexPolygon, Point2, distance
from swarmpath.core.planner import (
    Bounds,
    PenaltyMode,
    PlannerOptions,
    Workspace,
    plan,
    verify_path,
)
from swarmpath.core.pso import PsoConfig


@pytest.fixture
def walled_workspace():
    """A wall crosses the whole workspace between start and goal."""
    return Workspace(
        bounds=Bounds(-1.0, -5.0, 11.0, 5.0),
        obstacles=(ConvexPolygon.of([(4, -6), (6, -6), (6, 6), (4, 6)]),),
        start=Point2(0.0, 0.0),
        goal=Point2(10.0, 0.0),
    )


class TestObstacleFreeRuns:
    @pytest.mark.parametrize("seed", range(5))
    def test_recovers_the_straight_line(self, empty_workspace, seed):
        """Without obstacles the path stays within 0.5% of the segment length."""
        result = plan(empty_workspace, PsoConfig(rng_seed=seed), n=10)
        assert result.feasible
        assert result.total_length <= 10.05
        assert len(result.path.waypoints) == 12
        assert result.path.waypoints[0] == empty_workspace.start
        assert result.path.waypoints[-1] == empty_workspace.goal
        to_goal = [distance(p, empty_workspace.goal) for p in result.path.waypoints]
        assert all(b <= a for a, b in zip(to_goal, to_goal[1:]))
        # The segment runs along y = 0, so |y| is the perpendicular offset.
        assert max(abs(p.y) for p in result.path.waypoints) < 0.05 * 10.0

    def test_single_line_picks_the_midpoint(self):
        """With n = 1 the waypoint lands on (1, 0) between (0, 0) and (2, 0)."""
        workspace = Workspace(
            bounds=Bounds(-1.0, -2.0, 3.0, 2.0),
            obstacles=(),
            start=Point2(0.0, 0.0),
            goal=Point2(2.0, 0.0),
        )
        result = plan(workspace, PsoConfig(rng_seed=1), n=1)
        start, waypoint, goal = result.path.waypoints
        assert (start, goal) == (workspace.start, workspace.goal)
        assert waypoint.x == 1.0
        assert waypoint.y == pytest.approx(0.0, abs=1e-3)
        assert result.total_length == pytest.approx(2.0, abs=1e-5)

    def test_waypoints_sit_on_their_lines(self, empty_workspace, small_pso):
        """Waypoint k lies on grid line k."""
        result = plan(empty_workspace, small_pso, n=9)
        xs = [p.x for p in result.path.waypoints[1:-1]]
        assert xs == [float(i) for i in range(1, 10)]

    def test_same_seed_same_path(self, blocked_workspace, small_pso):
        """A run is reproducible from its seed."""
        first = plan(blocked_workspace, small_pso, n=15)
        second = plan(blocked_workspace, small_pso, n=15)
        assert first.path == second.path
        assert first.per_waypoint_fitness == second.per_waypoint_fitness
        assert first.iterations_per_waypoint == second.iterations_per_waypoint

    def test_different_seeds_differ(self, blocked_workspace, small_pso):
        """The seed actually drives the swarm."""
        other = small_pso.model_copy(update={"rng_seed": small_pso.rng_seed + 1})
        first = plan(blocked_workspace, small_pso, n=15)
        second = plan(blocked_workspace, other, n=15)
        assert first.path != second.path


class TestObstacleRuns:
    def test_goes_around_the_diamond(self, blocked_workspace, small_pso):
        """The planned path is clean and no shorter than the straight line."""
        result = plan(blocked_workspace, small_pso, n=20)
        assert result.feasible
        assert result.collisions == ()
        assert verify_path(result.path, blocked_workspace.inflated_obstacles) == ()
        straight = distance(blocked_workspace.start, blocked_workspace.goal)
        assert result.total_length >= straight
        assert len(result.iterations_per_waypoint) == 20
        assert all(1 <= it <= 40 for it in result.iterations_per_waypoint)
        assert all(math.isfinite(f) for f in result.per_waypoint_fitness)

    @pytest.mark.parametrize("mode", list(PenaltyMode))
    def test_wall_is_reported_not_raised(self, walled_workspace, small_pso, mode):
        """An impassable wall yields an infeasible result with collisions."""
        result = plan(
            walled_workspace,
            small_pso,
            n=10,
            options=PlannerOptions(penalty_mode=mode),
        )
        assert not result.feasible
        assert result.collisions
        assert math.isfinite(result.total_length)

    def test_waypoint_only_mode_ignores_segments(self, blocked_workspace, small_pso):
        """With strict_segments off only waypoints are checked."""
        result = plan(blocked_workspace, small_pso, n=20, strict_segments=False)
        assert all(c.kind == "waypoint" for c in result.collisions)
        assert verify_path(
            result.path,
            blocked_workspace.inflated_obstacles,
            strict_segments=False,
        ) == result.collisions
