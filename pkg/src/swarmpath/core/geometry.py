"""Exact 2D primitives used by the planner, the oracle and the loader.

Every shape is an immutable value object. Obstacles are closed sets: a point
lying on the boundary (within ``EPSILON``) counts as a collision.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
import math
from typing import Final, Self

import numpy as np
from numpy.typing import NDArray

from swarmpath.core.exceptions import GeometryError


EPSILON: Final[float] = 1e-9
"""Default sidedness tolerance in meters."""

FloatArray = NDArray[np.float64]
BoolArray = NDArray[np.bool_]


@dataclass(frozen=True, slots=True)
class Point2:
    """A position in the 2D workspace, in meters."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"Point coordinates must be finite, got {self}")

    @classmethod
    def of(cls, values: Sequence[float]) -> Self:
        """Build a point from an ``[x, y]`` pair."""
        if len(values) != 2:
            raise GeometryError(f"Expected two coordinates, got {len(values)}")
        return cls(float(values[0]), float(values[1]))

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    def as_array(self) -> FloatArray:
        return np.array([self.x, self.y], dtype=np.float64)


@dataclass(frozen=True)
class Circle:
    """Circular obstacle.

    Attributes:
        center (Point2): Center of the disc.
        radius (float): Radius in meters, strictly positive.
    """

    center: Point2
    radius: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.radius) or self.radius <= 0:
            raise GeometryError(f"Circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise vertices.

    Construction rejects fewer than three vertices, repeated vertices,
    collinear triples, clockwise order and self-intersecting (multiply
    wound) outlines.

    Attributes:
        vertices (tuple[Point2, ...]): Vertices in counter-clockwise order.
    """

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        vertices = tuple(self.vertices)
        object.__setattr__(self, "vertices", vertices)
        if len(vertices) < 3:
            raise GeometryError(
                f"Polygon needs at least 3 vertices, got {len(vertices)}",
            )
        if len(set(vertices)) != len(vertices):
            raise GeometryError("Polygon has repeated vertices")

        count = len(vertices)
        turning = 0.0
        for i in range(count):
            a, b, c = vertices[i - 1], vertices[i], vertices[(i + 1) % count]
            e1 = (b.x - a.x, b.y - a.y)
            e2 = (c.x - b.x, c.y - b.y)
            cross = e1[0] * e2[1] - e1[1] * e2[0]
            # Relative to the edge lengths so the test does not depend on scale.
            if cross <= EPSILON * math.hypot(*e1) * math.hypot(*e2):
                raise GeometryError(
                    f"Polygon is not strictly convex and counter-clockwise at vertex {i}",
                )
            turning += math.atan2(cross, e1[0] * e2[0] + e1[1] * e2[1])
        # A simple convex outline turns exactly once.
        if not math.isclose(turning, 2 * math.pi, rel_tol=1e-6):
            raise GeometryError("Polygon outline winds more than once")

    @classmethod
    def of(cls, vertices: Iterable[Sequence[float] | Point2]) -> Self:
        """Build a polygon from points or ``[x, y]`` pairs."""
        return cls(
            tuple(v if isinstance(v, Point2) else Point2.of(v) for v in vertices),
        )

    @cached_property
    def array(self) -> FloatArray:
        """Vertices as a ``(k, 2)`` array."""
        return np.array([v.as_tuple() for v in self.vertices], dtype=np.float64)

    @cached_property
    def normals(self) -> FloatArray:
        """Unit outward normal of edge ``i`` (from vertex ``i`` to ``i + 1``)."""
        edges = np.roll(self.array, -1, axis=0) - self.array
        normals = np.column_stack((edges[:, 1], -edges[:, 0]))
        return normals / np.hypot(normals[:, 0], normals[:, 1])[:, None]

    @cached_property
    def offsets(self) -> FloatArray:
        """Support value ``n_i . v_i`` of each edge line."""
        return np.einsum("ij,ij->i", self.normals, self.array)


Obstacle = Circle | ConvexPolygon
"""An obstacle region: a disc or a convex polygon."""


def distance(a: Point2, b: Point2) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a.x - b.x, a.y - b.y)


def signed_area(vertices: Sequence[Point2]) -> float:
    """Shoelace area, positive for counter-clockwise order."""
    total = 0.0
    for i, b in enumerate(vertices):
        a = vertices[i - 1]
        total += a.x * b.y - b.x * a.y
    return total / 2.0


def orient_ccw(vertices: Sequence[Point2]) -> tuple[Point2, ...]:
    """Return ``vertices`` in counter-clockwise order."""
    if signed_area(vertices) < 0:
        return tuple(reversed(vertices))
    return tuple(vertices)


def contains_point(obstacle: Obstacle, p: Point2, eps: float = EPSILON) -> bool:
    """Check whether a point lies inside or on the boundary of an obstacle.

    Args:
        obstacle (Obstacle): Obstacle to test against.
        p (Point2): Query point.
        eps (float, optional): Sidedness tolerance in meters.

    Returns:
        bool: True for interior and boundary points.
    """
    match obstacle:
        case Circle(center=center, radius=radius):
            return math.hypot(p.x - center.x, p.y - center.y) <= radius + eps
        case ConvexPolygon():
            return bool(
                np.all(obstacle.normals @ p.as_array() - obstacle.offsets <= eps),
            )
    raise GeometryError(f"Unsupported obstacle type: {type(obstacle).__name__}")


def contains_points(
    obstacle: Obstacle,
    points: FloatArray,
    eps: float = EPSILON,
) -> BoolArray:
    """Vectorized :func:`contains_point` over an ``(n, 2)`` array of points."""
    match obstacle:
        case Circle(center=center, radius=radius):
            dx = points[:, 0] - center.x
            dy = points[:, 1] - center.y
            return np.hypot(dx, dy) <= radius + eps
        case ConvexPolygon():
            signed = points @ obstacle.normals.T - obstacle.offsets
            return np.all(signed <= eps, axis=1)
    raise GeometryError(f"Unsupported obstacle type: {type(obstacle).__name__}")


def segment_intersects(
    obstacle: Obstacle,
    a: Point2,
    b: Point2,
    eps: float = EPSILON,
) -> bool:
    """Check whether the closed segment ``ab`` touches the closed obstacle.

    A zero-length segment degenerates to :func:`contains_point`. The endpoints
    are put in a canonical order first so the result is symmetric in ``a`` and
    ``b`` bit for bit.

    Args:
        obstacle (Obstacle): Obstacle to test against.
        a (Point2): First endpoint.
        b (Point2): Second endpoint.
        eps (float, optional): Sidedness tolerance in meters.

    Returns:
        bool: True if the segment and the obstacle share at least one point.
    """
    if a == b:
        return contains_point(obstacle, a, eps)
    if b.as_tuple() < a.as_tuple():
        a, b = b, a

    match obstacle:
        case Circle(center=center, radius=radius):
            dx, dy = b.x - a.x, b.y - a.y
            length_sq = dx * dx + dy * dy
            # Distinct endpoints can still underflow to a zero length.
            if length_sq == 0.0:
                return contains_point(obstacle, a, eps)
            t = ((center.x - a.x) * dx + (center.y - a.y) * dy) / length_sq
            t = min(1.0, max(0.0, t))
            closest = (a.x + t * dx, a.y + t * dy)
            gap = math.hypot(closest[0] - center.x, closest[1] - center.y)
            return gap <= radius + eps
        case ConvexPolygon():
            return bool(
                segments_intersect(obstacle, a, b.as_array()[None, :], eps)[0],
            )
    raise GeometryError(f"Unsupported obstacle type: {type(obstacle).__name__}")


def segments_intersect(
    obstacle: Obstacle,
    origin: Point2,
    ends: FloatArray,
    eps: float = EPSILON,
) -> BoolArray:
    """Vectorized segment test for segments sharing one endpoint.

    Polygons use the separating axis theorem over the edge normals and the
    segment normal; circles compare the center-to-segment distance with the
    radius.

    Args:
        obstacle (Obstacle): Obstacle to test against.
        origin (Point2): Common first endpoint of all segments.
        ends (FloatArray): ``(n, 2)`` array of second endpoints.
        eps (float, optional): Sidedness tolerance in meters.

    Returns:
        BoolArray: ``(n,)`` mask, True where the segment touches the obstacle.
    """
    a = origin.as_array()
    d = ends - a
    match obstacle:
        case Circle(center=center, radius=radius):
            c = center.as_array()
            length_sq = np.einsum("ij,ij->i", d, d)
            proj = d @ (c - a)
            t = np.divide(
                proj,
                length_sq,
                out=np.zeros_like(proj),
                where=length_sq > 0,
            )
            closest = a + np.clip(t, 0.0, 1.0)[:, None] * d
            gap = np.hypot(closest[:, 0] - c[0], closest[:, 1] - c[1])
            return gap <= radius + eps
        case ConvexPolygon():
            # Edge normal axes: the polygon spans [min, offset] on each.
            proj_a = obstacle.normals @ a
            proj_b = ends @ obstacle.normals.T
            poly_proj = obstacle.array @ obstacle.normals.T
            poly_min = poly_proj.min(axis=0)
            seg_lo = np.minimum(proj_a, proj_b)
            seg_hi = np.maximum(proj_a, proj_b)
            separated = np.any(
                (seg_lo > obstacle.offsets + eps) | (seg_hi < poly_min - eps),
                axis=1,
            )

            # Segment normal axis.
            norm = np.hypot(d[:, 0], d[:, 1])
            normal = np.column_stack((-d[:, 1], d[:, 0]))
            normal = np.divide(
                normal,
                norm[:, None],
                out=np.zeros_like(normal),
                where=norm[:, None] > 0,
            )
            seg_value = normal @ a
            poly_on_normal = normal @ obstacle.array.T
            separated |= (seg_value > poly_on_normal.max(axis=1) + eps) | (
                seg_value < poly_on_normal.min(axis=1) - eps
            )
            return ~separated
    raise GeometryError(f"Unsupported obstacle type: {type(obstacle).__name__}")


def segment_crosses_interior(
    polygon: ConvexPolygon,
    a: Point2,
    b: Point2,
    eps: float = EPSILON,
) -> bool:
    """Check whether segment ``ab`` passes through the open polygon interior.

    Touching a vertex or running along an edge does not count. This is the
    visibility predicate of the shortest-path oracle.
    """
    starts = a.as_array()[None, :]
    ends = b.as_array()[None, :]
    return bool(segments_cross_interior(polygon, starts, ends, eps)[0])


def segments_cross_interior(
    polygon: ConvexPolygon,
    starts: FloatArray,
    ends: FloatArray,
    eps: float = EPSILON,
) -> BoolArray:
    """Vectorized :func:`segment_crosses_interior` over ``(m, 2)`` endpoints.

    Each segment is clipped (Cyrus-Beck) against the polygon shrunk by
    ``eps``; a non-empty clipped interval means the interior is crossed.
    """
    num = polygon.offsets - eps - starts @ polygon.normals.T
    den = (ends - starts) @ polygon.normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        t = num / den
    t_lo = np.maximum(0.0, np.max(np.where(den < 0, t, -np.inf), axis=1))
    t_hi = np.minimum(1.0, np.min(np.where(den > 0, t, np.inf), axis=1))
    parallel_outside = np.any((den == 0) & (num <= 0), axis=1)
    return (t_lo < t_hi) & ~parallel_outside


def inflate(obstacle: Obstacle, margin: float) -> Obstacle:
    """Grow an obstacle outward by ``margin``.

    Circles gain ``margin`` on the radius. Polygons push every edge line out
    along its normal and intersect the shifted half-planes, which yields
    mitered corners and a superset of the exact rounded offset region.

    Args:
        obstacle (Obstacle): Obstacle to grow.
        margin (float): Offset distance in meters, strictly positive.

    Returns:
        Obstacle: The grown obstacle, of the same kind.

    Raises:
        GeometryError: If ``margin`` is not a positive finite number.
    """
    if not math.isfinite(margin) or margin <= 0:
        raise GeometryError(f"Inflation margin must be positive, got {margin}")

    match obstacle:
        case Circle(center=center, radius=radius):
            return Circle(center, radius + margin)
        case ConvexPolygon():
            normals = obstacle.normals
            previous = np.roll(normals, 1, axis=0)
            # Vertex i is shared by edges i-1 and i; the miter point moves
            # along the bisector of their normals.
            scale = margin / (1.0 + np.einsum("ij,ij->i", previous, normals))
            moved = obstacle.array + (previous + normals) * scale[:, None]
            return ConvexPolygon(tuple(Point2(float(x), float(y)) for x, y in moved))
    raise GeometryError(f"Unsupported obstacle type: {type(obstacle).__name__}")


def circumscribed_polygon(circle: Circle, sides: int = 32) -> ConvexPolygon:
    """Regular polygon whose edges are tangent to ``circle``."""
    if sides < 3:
        raise GeometryError(f"A polygon needs at least 3 sides, got {sides}")
    reach = circle.radius / math.cos(math.pi / sides)
    # Offset by half a step so edge midpoints sit on the axes.
    angles = (np.arange(sides) + 0.5) * (2 * math.pi / sides)
    return ConvexPolygon(
        tuple(
            Point2(
                circle.center.x + reach * math.cos(angle),
                circle.center.y + reach * math.sin(angle),
            )
            for angle in angles
        ),
    )


def extent(obstacle: Obstacle) -> tuple[float, float, float, float]:
    """Axis-aligned bounding box as ``(xmin, ymin, xmax, ymax)``."""
    match obstacle:
        case Circle(center=center, radius=radius):
            return (
                center.x - radius,
                center.y - radius,
                center.x + radius,
                center.y + radius,
            )
        case ConvexPolygon():
            lo = obstacle.array.min(axis=0)
            hi = obstacle.array.max(axis=0)
            return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))
    raise GeometryError(f"Unsupported obstacle type: {type(obstacle).__name__}")
