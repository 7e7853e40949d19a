from fastapi import APIRouter

from swarmpath.envio import (
    BundledEnvironment,
    EnvironmentDocument,
    bundled_environment,
    environment_document,
    list_bundled,
)


router = APIRouter()


@router.get("", response_model=list[BundledEnvironment])
def list_environments():
    """List the bundled scenarios."""
    return list_bundled()


@router.get("/{env_id}", response_model=EnvironmentDocument)
def get_environment(env_id: int):
    """Return the canonical document of a bundled scenario."""
    return environment_document(bundled_environment(env_id))
