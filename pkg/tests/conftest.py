from fastapi.testclient import TestClient
import pytest

from swarmpath.core.geometry import Circle, ConvexPolygon, Point2
from swarmpath.core.planner import Bounds, Workspace
from swarmpath.core.pso import PsoConfig
from swarmpath.main import app


@pytest.fixture
def unit_square():
    """Counter-clockwise unit square with its lower-left corner at the origin."""
    return ConvexPolygon.of([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def unit_circle():
    """Circle of radius 1 centered at the origin."""
    return Circle(Point2(0.0, 0.0), 1.0)


@pytest.fixture
def small_pso():
    """Cheap swarm settings for tests that do not measure quality."""
    return PsoConfig(swarm_size=40, max_iterations=40, rng_seed=3)


@pytest.fixture
def empty_workspace():
    """Obstacle-free workspace from (0, 0) to (10, 0)."""
    return Workspace(
        bounds=Bounds(-1.0, -5.0, 11.0, 5.0),
        obstacles=(),
        start=Point2(0.0, 0.0),
        goal=Point2(10.0, 0.0),
    )


@pytest.fixture
def blocked_workspace():
    """Workspace whose straight start-goal segment crosses one diamond."""
    return Workspace(
        bounds=Bounds(-1.0, -5.0, 11.0, 5.0),
        obstacles=(ConvexPolygon.of([(5, -1), (6, 0), (5, 1), (4, 0)]),),
        start=Point2(0.0, 0.0),
        goal=Point2(10.0, 0.2),
        robot_radius=0.1,
        safety_margin=0.1,
    )


@pytest.fixture
def environment_document():
    """Valid environment document as a Python dict."""
    return {
        "schema_version": 1,
        "bounds": {"xmin": -1.0, "ymin": -1.0, "xmax": 10.0, "ymax": 10.0},
        "start": [0.0, 0.0],
        "goal": [8.0, 9.0],
        "robot_radius": 0.1,
        "safety_margin": 0.2,
        "obstacles": [
            {"kind": "circle", "center": [4.0, 4.0], "radius": 1.0},
            {
                "kind": "polygon",
                "vertices": [[6.0, 1.0], [7.0, 2.0], [6.0, 3.0], [5.0, 2.0]],
            },
        ],
    }


@pytest.fixture()
def client():
    with TestClient(app) as c:
        yield c
