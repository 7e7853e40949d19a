"""Particle swarm path planning for a circular robot.

The package holds the planning core (geometry, swarm optimizer, grid-line
planner and visibility-graph oracle), environment file handling, run
orchestration, the command-line front end and an HTTP planning service.
"""

__version__ = "0.1.0"
