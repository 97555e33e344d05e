"""Exception types shared across the package."""

from __future__ import annotations


class VsemError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(VsemError):
    """Two embeddings (or embedding sets) do not share a dimension."""


class DatasetError(VsemError):
    """A payload file or manifest is missing, malformed, or inconsistent."""


class SnapshotError(VsemError):
    """A snapshot document cannot be produced or restored."""


class PreconditionError(VsemError):
    """An operation was invoked outside its contract."""
