"""Exception types shared across the simulator."""


class RisSimError(Exception):
    """Base class for all simulator errors."""


class InvalidConfigError(RisSimError):
    """A configuration value violates its contract."""


class DomainError(RisSimError):
    """An input lies outside the validity range of a model."""


class DegenerateGeometryError(DomainError):
    """A geometric computation is undefined, e.g. coincident nodes."""
