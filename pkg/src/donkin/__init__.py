"""Exact root-system and formal-character computations with a chain verifier."""

__version__ = "0.1.0"

from .rootsystem import (  # noqa: F401
    GroupType,
    RootDatum,
    SimpleType,
    Weight,
    build_root_datum,
    normalize_type,
)
