from pydantic import ValidationError

from swarmpath.api.models.plans import EnvironmentSource, PlanRequest
from swarmpath.config.settings import Settings
from swarmpath.core.exceptions import PsoConfigError, UnknownEnvironmentError
from swarmpath.core.oracle import OraclePath
from swarmpath.core.planner import Workspace
from swarmpath.core.pso import PsoConfig
from swarmpath.envio import bundled_environment, to_workspace
from swarmpath.services.planning import PlanJob, RunOutcome, reference_path, run


class PlanService:
    """Handles planning requests against the configured defaults."""

    def __init__(self, settings: Settings):
        self.settings = settings

    def resolve(self, source: EnvironmentSource) -> tuple[Workspace, str]:
        """Turn an inline document or bundled id into a workspace and label."""
        if source.environment is not None:
            return to_workspace(source.environment), "<request>"
        if source.bundled is None:
            raise UnknownEnvironmentError("No environment given")
        return bundled_environment(source.bundled), f"bundled:{source.bundled}"

    def job(self, request: PlanRequest) -> PlanJob:
        """Build the planning job for a request.

        Raises:
            PsoConfigError: If the overrides break a swarm invariant.
        """
        workspace, label = self.resolve(request)
        overrides = request.pso.model_dump(exclude_none=True)
        try:
            pso = PsoConfig.model_validate(
                self.settings.pso.model_dump() | overrides | {"rng_seed": request.seed},
            )
        except ValidationError as e:
            raise PsoConfigError(e.errors()[0]["msg"]) from e
        planner = self.settings.planner
        if request.penalty_mode is not None:
            planner = planner.model_copy(update={"penalty_mode": request.penalty_mode})
        return PlanJob(
            workspace=workspace,
            environment=label,
            pso=pso,
            waypoints=request.waypoints or planner.waypoints,
            strict_segments=(
                planner.strict_segments
                if request.strict_segments is None
                else request.strict_segments
            ),
            options=planner.options(),
            circle_sides=self.settings.geometry.circle_sides,
        )

    def plan(self, request: PlanRequest) -> RunOutcome:
        """Run the planner once for a request."""
        return run(self.job(request), compare_oracle=request.compare_oracle)

    def oracle(self, source: EnvironmentSource) -> OraclePath:
        """Compute the visibility-graph shortest path."""
        workspace, label = self.resolve(source)
        job = PlanJob(
            workspace=workspace,
            environment=label,
            pso=self.settings.pso,
            circle_sides=self.settings.geometry.circle_sides,
        )
        return reference_path(job)
