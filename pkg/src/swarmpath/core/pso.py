"""Seedable particle swarm optimizer over a bounded box.

The swarm is stored as ``(N, D)`` arrays. Random numbers are drawn from a
single ``numpy.random.Generator`` seeded with ``PsoConfig.rng_seed`` in this
order:

1. initial positions, ``(N, D)`` uniform draws, particle-major;
2. initial velocities, ``(N, D)`` uniform draws, particle-major;
3. every step, ``(N, D, 2)`` uniform draws: particle, then dimension, then
   ``r1`` before ``r2``.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
import math
from typing import Any, Protocol

from loguru import logger
import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from swarmpath.core.exceptions import PsoConfigError


FloatArray = NDArray[np.float64]

BatchFitness = Callable[[FloatArray], FloatArray | Sequence[float]]
"""Fitness over a ``(N, D)`` array of positions, returning ``N`` values."""


class UniformSource(Protocol):
    """Anything that yields uniform ``[0, 1)`` draws of a given shape."""

    def random(self, size: Any) -> FloatArray: ...


class PsoConfig(BaseModel):
    """Swarm hyper-parameters.

    Defaults are the reference settings: 500 particles, 100 iterations,
    inertia decaying linearly from 0.9 to 0.4, both learning rates 2 and a
    velocity cap of 200.

    Attributes:
        swarm_size (int): Number of particles N, at least 2.
        max_iterations (int): Iteration budget it_max, at least 1.
        omega_max (float): Inertia weight at iteration 0.
        omega_min (float): Inertia weight at iteration it_max.
        c1 (float): Individual learning rate.
        c2 (float): Group learning rate.
        v_max (float): Cap on the absolute value of each velocity component.
        v_min (float): Lower end of the initial velocity range.
        convergence_epsilon (float): Stop once the swarm spread falls below this.
        rng_seed (int): Seed of the random generator, unsigned 64-bit.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    swarm_size: int = Field(default=500, ge=2)
    max_iterations: int = Field(default=100, ge=1)
    omega_max: float = 0.9
    omega_min: float = 0.4
    c1: float = Field(default=2.0, ge=0)
    c2: float = Field(default=2.0, ge=0)
    v_max: float = Field(default=200.0, gt=0, allow_inf_nan=False)
    v_min: float = Field(default=0.0, allow_inf_nan=False)
    convergence_epsilon: float = Field(default=1e-6, ge=0)
    rng_seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def check_ranges(self) -> "PsoConfig":
        """Validate the cross-field invariants.

        Raises:
            ValueError: If ``omega_max < omega_min`` or ``v_min > v_max``.

        Returns:
            PsoConfig: The validated configuration.
        """
        if self.omega_max < self.omega_min:
            raise ValueError("omega_max must be greater than or equal to omega_min")
        if self.v_min > self.v_max:
            raise ValueError("v_min must not exceed v_max")
        return self


@dataclass(frozen=True)
class SearchDomain:
    """Axis-aligned box searched by the swarm.

    Attributes:
        lower (tuple[float, ...]): Per-dimension lower bound X_min.
        upper (tuple[float, ...]): Per-dimension upper bound X_max.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        lower, upper = tuple(map(float, self.lower)), tuple(map(float, self.upper))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if not lower or len(lower) != len(upper):
            raise PsoConfigError("Domain bounds must be non-empty and of equal length")
        for dim, (lo, hi) in enumerate(zip(lower, upper, strict=True)):
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
                raise PsoConfigError(
                    f"Domain dimension {dim} needs finite bounds with lower < upper",
                )

    @classmethod
    def interval(cls, lower: float, upper: float) -> "SearchDomain":
        """One-dimensional domain ``[lower, upper]``."""
        return cls((lower,), (upper,))

    @property
    def dimensions(self) -> int:
        return len(self.lower)

    @property
    def lower_array(self) -> FloatArray:
        return np.asarray(self.lower, dtype=np.float64)

    @property
    def upper_array(self) -> FloatArray:
        return np.asarray(self.upper, dtype=np.float64)


@dataclass(frozen=True)
class Particle:
    """Read-only view of one particle of a :class:`SwarmState`."""

    position: FloatArray
    velocity: FloatArray
    pbest_position: FloatArray
    pbest_fitness: float


@dataclass(frozen=True)
class SwarmState:
    """Swarm snapshot between two steps.

    ``pbest_fitness`` holds ``+inf`` until a particle is first evaluated, and
    ``gbest_fitness`` is ``+inf`` until some particle returns a finite value.
    The generator is shared with the successor state produced by :func:`step`.
    """

    positions: FloatArray
    velocities: FloatArray
    pbest_positions: FloatArray
    pbest_fitness: FloatArray
    gbest_position: FloatArray
    gbest_fitness: float
    iteration: int
    rng: UniformSource = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return int(self.positions.shape[0])

    def particle(self, index: int) -> Particle:
        """Return a copy of the particle at ``index``."""
        return Particle(
            position=self.positions[index].copy(),
            velocity=self.velocities[index].copy(),
            pbest_position=self.pbest_positions[index].copy(),
            pbest_fitness=float(self.pbest_fitness[index]),
        )

    def spread(self) -> float:
        """Largest per-dimension range of the current positions."""
        return float(np.max(np.ptp(self.positions, axis=0)))


@dataclass(frozen=True)
class OptimizeResult:
    """Outcome of :func:`optimize`.

    Attributes:
        gbest_position (FloatArray): Best position found.
        gbest_fitness (float): Fitness at ``gbest_position``.
        iterations_used (int): Steps performed, at most ``max_iterations``.
        history (tuple[float, ...]): gbest fitness after each step.
    """

    gbest_position: FloatArray
    gbest_fitness: float
    iterations_used: int
    history: tuple[float, ...]


def inertia_weight(it: int, config: PsoConfig) -> float:
    """Linearly decreasing inertia weight.

    Args:
        it (int): Iteration index, ``0 <= it <= max_iterations``.
        config (PsoConfig): Swarm configuration.

    Returns:
        float: ``omega_max`` at 0, ``omega_min`` at ``max_iterations``.

    Raises:
        PsoConfigError: If ``it`` is outside ``[0, max_iterations]``.
    """
    if it < 0 or it > config.max_iterations:
        raise PsoConfigError(
            f"Iteration {it} outside [0, {config.max_iterations}]",
        )
    if it == config.max_iterations:
        return config.omega_min
    span = config.omega_max - config.omega_min
    return config.omega_max - span * it / config.max_iterations


def pointwise(fitness: Callable[[FloatArray], float]) -> BatchFitness:
    """Adapt a single-point fitness function to the batched interface."""

    def batch(positions: FloatArray) -> FloatArray:
        return np.fromiter(
            (fitness(row) for row in positions),
            dtype=np.float64,
            count=positions.shape[0],
        )

    return batch


def init_swarm(
    config: PsoConfig,
    domain: SearchDomain,
    rng: UniformSource | None = None,
) -> SwarmState:
    """Create the initial swarm.

    Positions are ``X_min + s1 (X_max - X_min)`` and velocities
    ``v_min + s2 (v_max - v_min)`` with uniform draws ``s1, s2``.

    Args:
        config (PsoConfig): Swarm configuration.
        domain (SearchDomain): Search box.
        rng (UniformSource, optional): Uniform source; defaults to a generator
            seeded with ``config.rng_seed``.

    Returns:
        SwarmState: Unevaluated swarm at iteration 0.
    """
    source = rng if rng is not None else np.random.default_rng(config.rng_seed)
    shape = (config.swarm_size, domain.dimensions)
    lower, upper = domain.lower_array, domain.upper_array

    positions = lower + source.random(shape) * (upper - lower)
    velocities = config.v_min + source.random(shape) * (config.v_max - config.v_min)
    return SwarmState(
        positions=positions,
        velocities=velocities,
        pbest_positions=positions.copy(),
        pbest_fitness=np.full(config.swarm_size, np.inf),
        gbest_position=positions[0].copy(),
        gbest_fitness=math.inf,
        iteration=0,
        rng=source,
    )


def evaluate(fitness: BatchFitness, positions: FloatArray) -> FloatArray:
    """Evaluate a batch and map NaN results to ``+inf``."""
    values = np.asarray(fitness(positions), dtype=np.float64).reshape(
        positions.shape[0],
    )
    return np.where(np.isnan(values), np.inf, values)


def step(
    state: SwarmState,
    config: PsoConfig,
    fitness: BatchFitness,
    domain: SearchDomain,
) -> SwarmState:
    """Run one swarm iteration.

    Evaluates the current positions, updates personal and global bests on
    strict improvement (ties keep the incumbent, lower indices win among
    equals), then moves every particle: velocity first, capped componentwise
    at ``v_max``, then position, saturated at the domain bounds.

    Args:
        state (SwarmState): Current swarm.
        config (PsoConfig): Swarm configuration.
        fitness (BatchFitness): Batched objective to minimize.
        domain (SearchDomain): Search box.

    Returns:
        SwarmState: The swarm at ``state.iteration + 1``.
    """
    values = evaluate(fitness, state.positions)

    improved = values < state.pbest_fitness
    pbest_positions = np.where(
        improved[:, None],
        state.positions,
        state.pbest_positions,
    )
    pbest_fitness = np.where(improved, values, state.pbest_fitness)

    gbest_position, gbest_fitness = state.gbest_position, state.gbest_fitness
    leader = int(np.argmin(pbest_fitness))
    if pbest_fitness[leader] < gbest_fitness:
        gbest_position = pbest_positions[leader].copy()
        gbest_fitness = float(pbest_fitness[leader])

    omega = inertia_weight(state.iteration, config)
    draws = state.rng.random((state.size, domain.dimensions, 2))
    velocities = (
        omega * state.velocities
        + config.c1 * draws[..., 0] * (pbest_positions - state.positions)
        + config.c2 * draws[..., 1] * (gbest_position - state.positions)
    )
    velocities = np.clip(velocities, -config.v_max, config.v_max)
    positions = np.clip(
        state.positions + velocities,
        domain.lower_array,
        domain.upper_array,
    )

    return replace(
        state,
        positions=positions,
        velocities=velocities,
        pbest_positions=pbest_positions,
        pbest_fitness=pbest_fitness,
        gbest_position=gbest_position,
        gbest_fitness=gbest_fitness,
        iteration=state.iteration + 1,
    )


def optimize(
    config: PsoConfig,
    domain: SearchDomain,
    fitness: BatchFitness,
) -> OptimizeResult:
    """Minimize ``fitness`` over ``domain``.

    Steps until ``max_iterations`` is reached or the swarm spread falls
    below ``convergence_epsilon``.

    Args:
        config (PsoConfig): Swarm configuration, including the seed.
        domain (SearchDomain): Search box.
        fitness (BatchFitness): Batched objective to minimize.

    Returns:
        OptimizeResult: Global best and convergence trace.
    """
    state = init_swarm(config, domain)
    history: list[float] = []
    while state.iteration < config.max_iterations:
        state = step(state, config, fitness, domain)
        history.append(state.gbest_fitness)
        if state.spread() < config.convergence_epsilon:
            logger.trace(f"Swarm converged after {state.iteration} iterations")
            break

    return OptimizeResult(
        gbest_position=state.gbest_position,
        gbest_fitness=state.gbest_fitness,
        iterations_used=state.iteration,
        history=tuple(history),
    )
