from contextlib import asynccontextmanager
import sys

from fastapi import FastAPI, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import ORJSONResponse
from loguru import logger
import uvicorn

from swarmpath import __version__
from swarmpath.api.dependencies.common import get_settings
from swarmpath.api.middleware.processing_time import ProcessingTimeMiddleware
from swarmpath.api.models.common import Tags
from swarmpath.api.routes import environments, plans, root
from swarmpath.config.logging_config import initialize_logging
from swarmpath.core.exceptions import (
    EnvironmentFileError,
    PsoConfigError,
    SwarmpathError,
    UnknownEnvironmentError,
    UnreachableGoalError,
    create_error_handler,
)


def create_application() -> FastAPI:
    """Create and configure the FastAPI application.

    Returns:
        Configured FastAPI application instance
    """
    app = FastAPI(
        title="swarmpath",
        description="Particle swarm path planning for a circular robot",
        summary="Plan collision-free paths among convex obstacles",
        version=__version__,
        lifespan=lifespan,
        default_response_class=ORJSONResponse,
    )

    # Configure CORS
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["http://localhost"],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    # Add custom middleware
    app.add_middleware(
        ProcessingTimeMiddleware,
        slow_request_ms=get_settings().app.SLOW_REQUEST_MS,
    )

    # Include routers
    app.include_router(root.router, tags=[Tags.general])
    app.include_router(
        environments.router,
        prefix="/environments",
        tags=[Tags.environments],
    )
    app.include_router(plans.router, tags=[Tags.planning])

    # Register exception handlers
    register_exception_handlers(app)

    return app


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Handle application startup and shutdown events.

    Args:
        app: FastAPI application instance
    """
    initialize_logging()
    logger.info("🚀 Starting up planning service...")
    yield
    logger.info("Shutting down planning service...")


def register_exception_handlers(app: FastAPI) -> None:
    """Register exception handlers for the application.

    The most specific registered class wins, so ``SwarmpathError`` only
    catches what the other entries do not.

    Args:
        app: FastAPI application instance
    """
    exception_handlers = {
        EnvironmentFileError: create_error_handler(
            status.HTTP_422_UNPROCESSABLE_ENTITY,
        ),
        PsoConfigError: create_error_handler(status.HTTP_422_UNPROCESSABLE_ENTITY),
        UnknownEnvironmentError: create_error_handler(status.HTTP_404_NOT_FOUND),
        UnreachableGoalError: create_error_handler(status.HTTP_409_CONFLICT),
        SwarmpathError: create_error_handler(status.HTTP_400_BAD_REQUEST),
    }

    for exception_class, handler in exception_handlers.items():
        app.add_exception_handler(exception_class, handler)


def get_application() -> FastAPI:
    """Get the configured FastAPI application instance.

    Returns:
        Configured FastAPI application
    """
    try:
        settings = get_settings()
        logger.info(f"Application settings loaded successfully: {settings}")
        return create_application()
    except Exception as e:
        logger.error(f"Failed to initialize application: {e}")
        sys.exit(1)


app = get_application()


def main():
    """Run the planning service using Uvicorn server."""
    settings = get_settings()
    uvicorn.run(
        "swarmpath.main:app",
        host=settings.app.SERVER_HOST,
        port=settings.app.SERVER_PORT,
        reload=settings.app.SERVER_RELOAD,
        log_level=settings.app.SERVER_LOG_LEVEL,
    )


if __name__ == "__main__":
    main()
