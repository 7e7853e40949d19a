from enum import Enum


class Tags(Enum):
    """Enumeration of API route tags for the OpenAPI documentation.

    Attributes:
        general (str): Health and root endpoints.
        environments (str): Bundled scenario endpoints.
        planning (str): Planner and oracle endpoints.
    """

    general = "General"
    environments = "Environments"
    planning = "Planning"
