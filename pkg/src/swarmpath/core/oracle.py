"""Exact shortest-path reference used to grade planner output.

Inflated obstacles are turned into polygons (circles into circumscribed
regular polygons), their vertices plus the start and goal become graph nodes,
and two nodes are joined when the segment between them avoids every polygon
interior. Dijkstra's algorithm then gives the shortest polyline.
"""

from dataclasses import dataclass
import heapq
import math

from loguru import logger
import numpy as np

from swarmpath.core.exceptions import UnreachableGoalError
from swarmpath.core.geometry import (
    EPSILON,
    Circle,
    ConvexPolygon,
    FloatArray,
    Point2,
    circumscribed_polygon,
    contains_point,
    distance,
    segments_cross_interior,
)
from swarmpath.core.planner import Workspace


CHUNK_SIZE = 16_384
"""Node pairs tested per vectorized batch."""

START, GOAL = 0, 1


@dataclass(frozen=True)
class VisibilityGraph:
    """Undirected visibility graph.

    Attributes:
        nodes (tuple[Point2, ...]): Node 0 is the start, node 1 the goal,
            the rest are polygon vertices.
        adjacency (tuple[tuple[tuple[int, float], ...], ...]): Neighbors and
            Euclidean edge weights of each node.
        polygons (tuple[ConvexPolygon, ...]): Inflated obstacles as polygons.
    """

    nodes: tuple[Point2, ...]
    adjacency: tuple[tuple[tuple[int, float], ...], ...]
    polygons: tuple[ConvexPolygon, ...]

    @property
    def edge_count(self) -> int:
        return sum(len(neighbors) for neighbors in self.adjacency) // 2


@dataclass(frozen=True)
class OraclePath:
    """Shortest visibility path."""

    path: tuple[Point2, ...]
    length: float


def obstacle_polygons(
    workspace: Workspace,
    circle_sides: int = 32,
) -> tuple[ConvexPolygon, ...]:
    """Inflated obstacles as polygons, circles circumscribed."""
    return tuple(
        (
            circumscribed_polygon(obstacle, circle_sides)
            if isinstance(obstacle, Circle)
            else obstacle
        )
        for obstacle in workspace.inflated_obstacles
    )


def _candidate_nodes(
    workspace: Workspace,
    polygons: tuple[ConvexPolygon, ...],
) -> list[Point2]:
    nodes = [workspace.start, workspace.goal]
    for owner, polygon in enumerate(polygons):
        for vertex in polygon.vertices:
            if not workspace.bounds.contains(vertex):
                continue
            # Drop vertices buried strictly inside another obstacle.
            if any(
                contains_point(other, vertex, eps=-EPSILON)
                for k, other in enumerate(polygons)
                if k != owner
            ):
                continue
            nodes.append(vertex)
    return nodes


def _visible_pairs(
    points: FloatArray,
    polygons: tuple[ConvexPolygon, ...],
) -> tuple[FloatArray, FloatArray]:
    first, second = np.triu_indices(points.shape[0], k=1)
    keep = np.ones(first.shape[0], dtype=bool)
    for lo in range(0, first.shape[0], CHUNK_SIZE):
        hi = lo + CHUNK_SIZE
        starts, ends = points[first[lo:hi]], points[second[lo:hi]]
        seg_min = np.minimum(starts, ends)
        seg_max = np.maximum(starts, ends)
        blocked = np.zeros(starts.shape[0], dtype=bool)
        for polygon in polygons:
            box_min = polygon.array.min(axis=0)
            box_max = polygon.array.max(axis=0)
            near = np.all((seg_max >= box_min) & (seg_min <= box_max), axis=1)
            if not near.any():
                continue
            blocked[near] |= segments_cross_interior(
                polygon,
                starts[near],
                ends[near],
            )
        keep[lo:hi] = ~blocked
    return first[keep], second[keep]


def build_visibility_graph(
    workspace: Workspace,
    circle_sides: int = 32,
) -> VisibilityGraph:
    """Build the visibility graph of a workspace.

    Args:
        workspace (Workspace): Planning problem.
        circle_sides (int, optional): Sides of the polygon replacing a circle.

    Returns:
        VisibilityGraph: Graph over start, goal and usable polygon vertices.
    """
    polygons = obstacle_polygons(workspace, circle_sides)
    nodes = _candidate_nodes(workspace, polygons)
    points = np.array([p.as_tuple() for p in nodes], dtype=np.float64)
    first, second = _visible_pairs(points, polygons)

    adjacency: list[list[tuple[int, float]]] = [[] for _ in nodes]
    for i, j in zip(first.tolist(), second.tolist(), strict=True):
        weight = distance(nodes[i], nodes[j])
        if weight <= 0:
            continue
        adjacency[i].append((j, weight))
        adjacency[j].append((i, weight))

    graph = VisibilityGraph(
        nodes=tuple(nodes),
        adjacency=tuple(tuple(neighbors) for neighbors in adjacency),
        polygons=polygons,
    )
    logger.debug(
        f"Visibility graph: {len(graph.nodes)} nodes, {graph.edge_count} edges",
    )
    return graph


def dijkstra(graph: VisibilityGraph, source: int, target: int) -> OraclePath:
    """Shortest path between two nodes.

    Raises:
        UnreachableGoalError: If ``target`` is not connected to ``source``.
    """
    best = [math.inf] * len(graph.nodes)
    parent = [-1] * len(graph.nodes)
    best[source] = 0.0
    queue = [(0.0, source)]
    while queue:
        cost, node = heapq.heappop(queue)
        if node == target:
            break
        if cost > best[node]:
            continue
        for neighbor, weight in graph.adjacency[node]:
            candidate = cost + weight
            if candidate < best[neighbor]:
                best[neighbor] = candidate
                parent[neighbor] = node
                heapq.heappush(queue, (candidate, neighbor))

    if math.isinf(best[target]):
        raise UnreachableGoalError(
            "No collision-free visibility path connects start and goal",
        )

    route = [target]
    while route[-1] != source:
        route.append(parent[route[-1]])
    route.reverse()
    return OraclePath(
        path=tuple(graph.nodes[i] for i in route),
        length=best[target],
    )


def shortest_path(workspace: Workspace, circle_sides: int = 32) -> OraclePath:
    """Shortest collision-free polyline from start to goal.

    Args:
        workspace (Workspace): Planning problem.
        circle_sides (int, optional): Sides of the polygon replacing a circle.

    Returns:
        OraclePath: Path and its length in meters.

    Raises:
        UnreachableGoalError: If the goal cannot be reached.
    """
    graph = build_visibility_graph(workspace, circle_sides)
    return dijkstra(graph, START, GOAL)
