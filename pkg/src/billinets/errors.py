"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Degenerate or inadmissible geometric input."""


class TangencyError(GeometryError):
    """Tangential incidence where a transversal one is required."""


class NoIntersectionError(GeometryError):
    """A line misses a quadric (no real intersection)."""


class ConstructionError(GeometryError):
    """A net/star construction failed; carries the lattice vertex if known."""

    def __init__(self, message, vertex=None):
        if vertex is not None:
            message = f"{message} (at vertex {tuple(vertex)})"
        super().__init__(message)
        self.vertex = tuple(vertex) if vertex is not None else None


class ConfigError(ValueError):
    """Invalid scene configuration document."""
