"""Exception hierarchy shared by all modules."""

__all__ = [
    "PrismHedgehogError",
    "RealizabilityError",
    "ClassificationError",
    "ConstructionError",
    "GeometryError",
    "DomainError",
    "AccuracyError",
    "BoundaryConditionError",
    "ResolutionError",
    "DensityInequalityError",
]


class PrismHedgehogError(Exception):
    """Base class for every error raised by this package."""


class RealizabilityError(PrismHedgehogError, ValueError):
    """Invariants (e, k, m) that no tangent unit-vector field can carry."""


class ClassificationError(PrismHedgehogError, ValueError):
    """Topology has the wrong class for the requested construction."""


class ConstructionError(PrismHedgehogError, RuntimeError):
    """Internal parity/admissibility check failed while building a representative."""


class GeometryError(PrismHedgehogError, RuntimeError):
    """No admissible glue disk could be placed."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DomainError(PrismHedgehogError, ValueError):
    """Point outside the domain of a map (quarter disk, Mobius pole, south pole)."""


class AccuracyError(PrismHedgehogError, RuntimeError):
    """Quadrature or rounding failed to reach the requested accuracy.

    ``partial`` carries whatever estimate was available at the time of failure.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BoundaryConditionError(PrismHedgehogError, ValueError):
    """Tangent boundary conditions violated beyond threshold."""


class ResolutionError(PrismHedgehogError, RuntimeError):
    """Boundary angle tracking could not be resolved by refinement."""


class DensityInequalityError(PrismHedgehogError, AssertionError):
    """|oriented density| exceeded the unoriented density at a sample."""
