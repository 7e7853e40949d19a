from typing import Any

from fastapi import Request
from fastapi.responses import ORJSONResponse


class SwarmpathError(Exception):
    """Base exception for every domain error raised by swarmpath."""

    def __init__(self, detail: str = "Path planning error"):
        """Initialize the SwarmpathError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic planning error.
        """
        super().__init__(detail)
        self.detail = detail


class GeometryError(SwarmpathError):
    """Exception for invalid geometric shapes or arguments."""

    def __init__(self, detail: str = "Invalid geometry"):
        """Initialize the GeometryError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic geometry error.
        """
        super().__init__(detail)


class PsoConfigError(SwarmpathError):
    """Exception for invalid swarm configuration or search domain."""

    def __init__(self, detail: str = "Invalid swarm configuration"):
        """Initialize the PsoConfigError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic swarm configuration error.
        """
        super().__init__(detail)


class WorkspaceError(SwarmpathError):
    """Exception for workspaces that break a workspace invariant."""

    def __init__(self, detail: str = "Invalid workspace", field_path: str = ""):
        """Initialize the WorkspaceError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic workspace error.
            field_path (str, optional): Offending workspace field, e.g. "start".
        """
        super().__init__(detail)
        self.field_path = field_path


class GridError(SwarmpathError):
    """Exception for grid-line models that cannot be built."""

    def __init__(self, detail: str = "Cannot build grid model"):
        """Initialize the GridError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic grid error.
        """
        super().__init__(detail)


class EnvironmentFileError(SwarmpathError):
    """Base exception for environment documents that fail to load."""

    def __init__(self, detail: str = "Invalid environment", field_path: str = ""):
        """Initialize the EnvironmentFileError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic environment error.
            field_path (str, optional): Dotted path of the offending field.
        """
        super().__init__(f"{field_path}: {detail}" if field_path else detail)
        self.field_path = field_path


class EnvironmentParseError(EnvironmentFileError):
    """Exception for documents that are not well-formed JSON."""


class SchemaVersionError(EnvironmentFileError):
    """Exception for documents written against another schema version."""


class EnvironmentValidationError(EnvironmentFileError):
    """Exception for documents that break the schema or a workspace invariant."""


class UnknownEnvironmentError(SwarmpathError):
    """Exception for bundled environment ids that do not exist."""

    def __init__(self, detail: str = "Unknown bundled environment"):
        """Initialize the UnknownEnvironmentError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic unknown environment error.
        """
        super().__init__(detail)


class UnreachableGoalError(SwarmpathError):
    """Exception for goals with no collision-free route from the start."""

    def __init__(self, detail: str = "Goal is unreachable from start"):
        """Initialize the UnreachableGoalError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic unreachable goal error.
        """
        super().__init__(detail)


class ConfigurationError(SwarmpathError):
    """Exception for settings files that cannot be loaded."""

    def __init__(self, detail: str = "Invalid configuration"):
        """Initialize the ConfigurationError.

        Args:
            detail (str, optional): Detailed error message.
            Defaults to a generic configuration error.
        """
        super().__init__(detail)


def create_error_handler(status_code: int):
    """Create a generic error handler for the given status code.

    Args:
        status_code: HTTP status code to return

    Returns:
        Exception handler function
    """

    async def handler(request: Request, exc: Any) -> ORJSONResponse:
        content = {"detail": exc.detail}
        field_path = getattr(exc, "field_path", "")
        if field_path:
            content["field_path"] = field_path
        return ORJSONResponse(status_code=status_code, content=content)

    return handler
