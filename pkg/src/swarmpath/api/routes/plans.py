from fastapi import APIRouter, Depends
from loguru import logger

from swarmpath.api.dependencies.plans import get_plan_service
from swarmpath.api.models.plans import (
    EnvironmentSource,
    OracleResponse,
    PlanRequest,
    PlanResponse,
)
from swarmpath.services.plans import PlanService


router = APIRouter()


# Sync handlers: planning is CPU-bound and runs in the threadpool.
@router.post("/plans", response_model=PlanResponse)
def create_plan(
    request: PlanRequest,
    plan_service: PlanService = Depends(get_plan_service),
):
    """Plan a path and return its report and waypoints."""
    outcome = plan_service.plan(request)
    logger.info(
        f"Planned on {outcome.report.environment}: "
        f"feasible={outcome.report.feasible} length={outcome.report.path_length:.4f}",
    )
    return PlanResponse(
        report=outcome.report,
        waypoints=[p.as_tuple() for p in outcome.result.path.waypoints],
    )


@router.post("/oracle", response_model=OracleResponse)
def shortest_path(
    source: EnvironmentSource,
    plan_service: PlanService = Depends(get_plan_service),
):
    """Return the visibility-graph shortest path, or 409 if unreachable."""
    oracle = plan_service.oracle(source)
    return OracleResponse(
        length=oracle.length,
        waypoints=[p.as_tuple() for p in oracle.path],
    )
