"""Shared exception types."""


class GeometryError(ValueError):
    """A point, ideal point, or parameter is invalid for its space."""
