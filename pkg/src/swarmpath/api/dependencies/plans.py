from typing import Annotated

from fastapi import Depends

from swarmpath.config.settings import Settings
from swarmpath.services.plans import PlanService

from .common import get_settings


def get_plan_service(settings: Annotated[Settings, Depends(get_settings)]):
    """Inject PlanService with the cached settings."""
    return PlanService(settings)
