"""Command-line front end: ``swarmpath plan``, ``sweep`` and ``serve``."""

import argparse
from collections.abc import Sequence
from pathlib import Path
import sys

from loguru import logger
from pydantic import ValidationError

from swarmpath.api.dependencies.common import get_settings
from swarmpath.config.log_models import LogLevel
from swarmpath.config.logging_config import initialize_logging
from swarmpath.config.settings import Settings
from swarmpath.core.exceptions import SwarmpathError, UnreachableGoalError
from swarmpath.core.planner import PenaltyMode, Workspace
from swarmpath.core.pso import PsoConfig
from swarmpath.envio import bundled_environment, load_environment_file
from swarmpath.services import artifacts
from swarmpath.services.planning import PlanJob, run, sweep


EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

# CLI flag -> PsoConfig field
PSO_FLAGS = {
    "particles": "swarm_size",
    "iterations": "max_iterations",
    "omega_max": "omega_max",
    "omega_min": "omega_min",
    "c1": "c1",
    "c2": "c2",
    "vmax": "v_max",
    "seed": "rng_seed",
}


def parse_bool(value: str) -> bool:
    """Parse a boolean flag value such as ``true`` or ``0``.

    Raises:
        argparse.ArgumentTypeError: If the value is not recognized.
    """
    normalized = value.strip().lower()
    if normalized in ("true", "1", "yes", "on"):
        return True
    if normalized in ("false", "0", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {value!r}")


def _add_planning_flags(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--env", type=Path, help="Environment JSON document.")
    source.add_argument(
        "--bundled",
        type=int,
        metavar="ID",
        help="Bundled environment id (1-4).",
    )

    swarm = parser.add_argument_group("swarm")
    swarm.add_argument("--seed", type=int, help="Base seed, unsigned 64-bit.")
    swarm.add_argument("--particles", type=int, help="Swarm size N.")
    swarm.add_argument("--iterations", type=int, help="Iteration budget.")
    swarm.add_argument("--omega-max", type=float, help="Initial inertia weight.")
    swarm.add_argument("--omega-min", type=float, help="Final inertia weight.")
    swarm.add_argument("--c1", type=float, help="Individual learning rate.")
    swarm.add_argument("--c2", type=float, help="Group learning rate.")
    swarm.add_argument("--vmax", type=float, help="Velocity cap.")

    planner = parser.add_argument_group("planner")
    planner.add_argument("--waypoints", type=int, help="Number of grid lines n.")
    planner.add_argument(
        "--strict-segments",
        type=parse_bool,
        metavar="BOOL",
        help="Require collision-free segments between waypoints.",
    )
    planner.add_argument(
        "--penalty-mode",
        choices=[mode.value for mode in PenaltyMode],
        help="Obstacle penalty: additive (soft) or rejection (hard).",
    )
    planner.add_argument(
        "--compare-oracle",
        action="store_true",
        help="Also compute the visibility-graph shortest path.",
    )

    output = parser.add_argument_group("output")
    output.add_argument("--json", type=Path, help="Write the report to this file.")
    output.add_argument(
        "--timings",
        action="store_true",
        help="Record wall-clock times in the report; reruns then differ.",
    )
    output.add_argument("-v", "--verbose", action="count", default=0)
    output.add_argument("-q", "--quiet", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with its three subcommands."""
    parser = argparse.ArgumentParser(
        prog="swarmpath",
        description="Plan collision-free paths with a particle swarm.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    plan_parser = commands.add_parser("plan", help="Plan one path.")
    _add_planning_flags(plan_parser)
    plan_parser.add_argument("--out", type=Path, help="Write waypoints as CSV.")
    plan_parser.add_argument("--svg", type=Path, help="Render the path as SVG.")

    sweep_parser = commands.add_parser("sweep", help="Plan over many seeds.")
    _add_planning_flags(sweep_parser)
    sweep_parser.add_argument(
        "--seeds",
        type=int,
        default=30,
        help="Number of consecutive seeds (default: 30).",
    )
    sweep_parser.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="Worker processes (default: 1).",
    )

    commands.add_parser("serve", help="Run the HTTP planning service.")
    return parser


def _console_level(args: argparse.Namespace) -> LogLevel | None:
    shift = getattr(args, "verbose", 0) - getattr(args, "quiet", 0)
    if shift == 0:
        return None
    if shift > 0:
        return LogLevel.DEBUG if shift == 1 else LogLevel.TRACE
    return LogLevel.WARNING if shift == -1 else LogLevel.ERROR


def load_workspace(args: argparse.Namespace) -> tuple[Workspace, str]:
    """Resolve ``--env`` or ``--bundled`` to a workspace and its label."""
    if args.bundled is not None:
        return bundled_environment(args.bundled), f"bundled:{args.bundled}"
    return load_environment_file(args.env), str(args.env)


def build_job(args: argparse.Namespace, settings: Settings) -> PlanJob:
    """Combine settings with command-line overrides.

    Raises:
        ValidationError: If an override breaks a swarm invariant.
    """
    workspace, label = load_workspace(args)
    overrides = {
        field: getattr(args, flag)
        for flag, field in PSO_FLAGS.items()
        if getattr(args, flag) is not None
    }
    pso = PsoConfig.model_validate(settings.pso.model_dump() | overrides)

    planner = settings.planner
    if args.penalty_mode is not None:
        planner = planner.model_copy(
            update={"penalty_mode": PenaltyMode(args.penalty_mode)},
        )
    return PlanJob(
        workspace=workspace,
        environment=label,
        pso=pso,
        waypoints=args.waypoints if args.waypoints is not None else planner.waypoints,
        strict_segments=(
            args.strict_segments
            if args.strict_segments is not None
            else planner.strict_segments
        ),
        options=planner.options(),
        circle_sides=settings.geometry.circle_sides,
    )


def run_plan(args: argparse.Namespace, settings: Settings) -> int:
    """Execute ``swarmpath plan`` and return the exit code."""
    job = build_job(args, settings)
    outcome = run(job, args.compare_oracle, deterministic=not args.timings)

    if args.out:
        artifacts.write_csv(outcome.result.path, args.out)
        logger.info(f"Wrote {len(outcome.result.path)} waypoints to {args.out}")
    if args.svg:
        artifacts.write_svg(job.workspace, args.svg, outcome.result.path)
    if args.json:
        artifacts.write_json(outcome.report, args.json)

    sys.stdout.buffer.write(artifacts.dump_json(outcome.report))
    sys.stdout.flush()
    return EXIT_OK if outcome.result.feasible else EXIT_INFEASIBLE


def run_sweep(args: argparse.Namespace, settings: Settings) -> int:
    """Execute ``swarmpath sweep`` and return the exit code."""
    job = build_job(args, settings)
    outcome = sweep(
        job,
        args.seeds,
        jobs=args.jobs,
        compare_oracle=args.compare_oracle,
        deterministic=not args.timings,
    )
    if args.json:
        artifacts.write_json(outcome.report, args.json)

    sys.stdout.buffer.write(artifacts.dump_json(outcome.report))
    sys.stdout.flush()
    return EXIT_OK if outcome.report.success_rate == 1.0 else EXIT_INFEASIBLE


def serve() -> int:
    """Run the HTTP planning service until interrupted."""
    from swarmpath import main as service

    service.main()
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``swarmpath`` console script.

    Args:
        argv (Sequence[str], optional): Arguments without the program name;
            defaults to ``sys.argv[1:]``.

    Returns:
        int: 0 on success, 2 when a plan is infeasible or the goal is
        unreachable, 1 on usage, IO and environment errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR

    if args.command == "serve":
        return serve()

    try:
        settings = get_settings()
        initialize_logging(_console_level(args))
        if args.command == "plan":
            return run_plan(args, settings)
        return run_sweep(args, settings)
    except UnreachableGoalError as e:
        print(f"swarmpath: {e.detail}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SwarmpathError as e:
        field_path = getattr(e, "field_path", "")
        where = f" (at {field_path})" if field_path else ""
        print(f"swarmpath: {e.detail}{where}", file=sys.stderr)
        return EXIT_ERROR
    except ValidationError as e:
        print(f"swarmpath: invalid parameters: {e.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        print(f"swarmpath: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
