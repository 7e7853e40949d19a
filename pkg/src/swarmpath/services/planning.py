"""Run and sweep orchestration behind the CLI and the HTTP service."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import math
import statistics

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from swarmpath.config.logging_config import run_label
from swarmpath.core.oracle import OraclePath, shortest_path
from swarmpath.core.planner import PlannerOptions, PlanResult, Workspace, plan
from swarmpath.core.pso import PsoConfig


SEED_MODULUS = 2**64


class RunReport(BaseModel):
    """Statistics of one seeded planning run.

    Attributes:
        environment (str): ``bundled:<id>`` or the environment file path.
        seed (int): Run seed.
        pso (PsoConfig): Swarm parameters used, seed included.
        waypoints (int): Number of grid lines n.
        strict_segments (bool): Whether segments were checked.
        penalty_mode (str): ``soft`` or ``hard``.
        feasible (bool): Planner verdict.
        path_length (float): Total length in meters.
        objective_value (float): Aggregate path objective.
        oracle_length (float | None): Visibility-graph length, when requested.
        length_ratio (float | None): ``path_length / oracle_length``.
        collisions (int): Findings of the feasibility re-check.
        wall_clock_ms (float): Planning time; zero in deterministic reports.
        iterations_per_waypoint (list[int]): Swarm steps used per line.
    """

    model_config = ConfigDict(frozen=True)

    environment: str
    seed: int
    pso: PsoConfig
    waypoints: int
    strict_segments: bool
    penalty_mode: str
    feasible: bool
    path_length: float
    objective_value: float
    oracle_length: float | None = None
    length_ratio: float | None = None
    collisions: int = 0
    wall_clock_ms: float = 0.0
    iterations_per_waypoint: list[int] = Field(default_factory=list)


class SweepReport(BaseModel):
    """Aggregate of a multi-seed sweep.

    Attributes:
        environment (str): Environment label.
        base_seed (int): Seed of the first run; run ``k`` uses ``base_seed + k``.
        seeds (int): Number of runs.
        success_rate (float): Share of feasible runs.
        min_length (float): Shortest path length over all runs.
        mean_length (float): Mean path length over all runs.
        max_length (float): Longest path length over all runs.
        mean_runtime_ms (float): Mean wall-clock time per run.
        oracle_length (float | None): Visibility-graph length, when requested.
        runs (list[RunReport]): Individual reports in seed order.
    """

    model_config = ConfigDict(frozen=True)

    environment: str
    base_seed: int
    seeds: int
    success_rate: float
    min_length: float
    mean_length: float
    max_length: float
    mean_runtime_ms: float
    oracle_length: float | None = None
    runs: list[RunReport]


@dataclass(frozen=True)
class PlanJob:
    """Everything needed to plan on one workspace, except the seed offset."""

    workspace: Workspace
    environment: str
    pso: PsoConfig
    waypoints: int = 100
    strict_segments: bool = True
    options: PlannerOptions = field(default_factory=PlannerOptions)
    circle_sides: int = 32

    def with_seed(self, seed: int) -> "PlanJob":
        """Copy of the job using ``seed``."""
        return replace(
            self,
            pso=self.pso.model_copy(update={"rng_seed": seed % SEED_MODULUS}),
        )


@dataclass(frozen=True)
class RunOutcome:
    """Planner result and its report."""

    result: PlanResult
    report: RunReport


@dataclass(frozen=True)
class SweepOutcome:
    """Per-seed results and the aggregate report."""

    results: tuple[PlanResult, ...]
    report: SweepReport


def _execute(job: PlanJob) -> PlanResult:
    with logger.contextualize(run=run_label(job.environment, job.pso.rng_seed)):
        return plan(
            job.workspace,
            job.pso,
            n=job.waypoints,
            strict_segments=job.strict_segments,
            options=job.options,
        )


def build_report(
    job: PlanJob,
    result: PlanResult,
    oracle: OraclePath | None = None,
    deterministic: bool = False,
) -> RunReport:
    """Summarize a planner result.

    Args:
        job (PlanJob): The job that produced ``result``.
        result (PlanResult): Planner output.
        oracle (OraclePath, optional): Reference path for the length ratio.
        deterministic (bool, optional): Zero the wall-clock time.

    Returns:
        RunReport: The report.
    """
    return RunReport(
        environment=job.environment,
        seed=result.seed,
        pso=job.pso,
        waypoints=job.waypoints,
        strict_segments=job.strict_segments,
        penalty_mode=job.options.penalty_mode.value,
        feasible=result.feasible,
        path_length=result.total_length,
        objective_value=result.objective_value,
        oracle_length=oracle.length if oracle else None,
        length_ratio=result.total_length / oracle.length if oracle else None,
        collisions=len(result.collisions),
        wall_clock_ms=0.0 if deterministic else result.elapsed_ms,
        iterations_per_waypoint=list(result.iterations_per_waypoint),
    )


def reference_path(job: PlanJob) -> OraclePath:
    """Oracle path of the job's workspace.

    Raises:
        UnreachableGoalError: If no collision-free route exists.
    """
    oracle = shortest_path(job.workspace, job.circle_sides)
    logger.info(f"Oracle length for {job.environment}: {oracle.length:.4f}")
    return oracle


def run(
    job: PlanJob,
    compare_oracle: bool = False,
    deterministic: bool = False,
) -> RunOutcome:
    """Plan once with the job's seed.

    Args:
        job (PlanJob): What to plan.
        compare_oracle (bool, optional): Also compute the oracle length.
        deterministic (bool, optional): Zero the wall-clock time in the report.

    Returns:
        RunOutcome: Result and report.

    Raises:
        UnreachableGoalError: If the oracle is requested and the goal is
            unreachable.
    """
    oracle = reference_path(job) if compare_oracle else None
    result = _execute(job)
    report = build_report(job, result, oracle, deterministic)
    if not result.feasible:
        logger.warning(
            f"Seed {result.seed} on {job.environment} is infeasible: "
            f"{len(result.collisions)} collisions",
        )
    return RunOutcome(result=result, report=report)


def sweep(
    job: PlanJob,
    seeds: int,
    jobs: int = 1,
    compare_oracle: bool = False,
    deterministic: bool = False,
) -> SweepOutcome:
    """Plan over ``seeds`` consecutive seeds starting at the job's seed.

    Runs are independent; with ``jobs > 1`` they execute in a process pool
    and are collected in seed order.

    Args:
        job (PlanJob): What to plan; ``job.pso.rng_seed`` is the base seed.
        seeds (int): Number of runs, at least 1.
        jobs (int, optional): Worker processes.
        compare_oracle (bool, optional): Also compute the oracle length.
        deterministic (bool, optional): Zero wall-clock times in the reports.

    Returns:
        SweepOutcome: Per-seed results and the aggregate report.

    Raises:
        ValueError: If ``seeds`` or ``jobs`` is below 1.
        UnreachableGoalError: If the oracle is requested and the goal is
            unreachable.
    """
    if seeds < 1 or jobs < 1:
        raise ValueError("seeds and jobs must both be at least 1")

    oracle = reference_path(job) if compare_oracle else None
    base_seed = job.pso.rng_seed
    batch = [job.with_seed(base_seed + k) for k in range(seeds)]

    if jobs == 1:
        results = [_execute(item) for item in batch]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_execute, batch))

    reports = []
    for item, result in zip(batch, results, strict=True):
        reports.append(build_report(item, result, oracle, deterministic))
        logger.info(
            f"Seed {result.seed}: feasible={result.feasible} "
            f"length={result.total_length:.4f}",
        )

    lengths = [r.path_length for r in reports]
    report = SweepReport(
        environment=job.environment,
        base_seed=base_seed,
        seeds=seeds,
        success_rate=sum(r.feasible for r in reports) / seeds,
        min_length=min(lengths),
        mean_length=math.fsum(lengths) / seeds,
        max_length=max(lengths),
        mean_runtime_ms=statistics.fmean(r.wall_clock_ms for r in reports),
        oracle_length=oracle.length if oracle else None,
        runs=reports,
    )
    return SweepOutcome(results=tuple(results), report=report)
