from .loader import (
    BUNDLED_IDS,
    bundled_environment,
    dump_environment,
    environment_document,
    list_bundled,
    load_environment,
    load_environment_file,
    to_workspace,
)
from .schema import SCHEMA_VERSION, BundledEnvironment, EnvironmentDocument


__all__ = [
    "BUNDLED_IDS",
    "SCHEMA_VERSION",
    "BundledEnvironment",
    "EnvironmentDocument",
    "bundled_environment",
    "dump_environment",
    "environment_document",
    "list_bundled",
    "load_environment",
    "load_environment_file",
    "to_workspace",
]
