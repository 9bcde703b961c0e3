"""Exception and warning types shared across the package."""


class BriepError(Exception):
    """Base class for all package errors."""


class ConfigError(BriepError):
    """Malformed or inconsistent run configuration."""


class GeometryError(BriepError):
    """Invalid boundary geometry."""


class InvalidGeometryError(GeometryError):
    """Geometry that cannot be constructed or panelized."""


class OutOfRangeError(GeometryError):
    """Arc-length coordinate outside an open component's domain."""


class SolverError(BriepError):
    """Boundary-element solve failed or is numerically untrustworthy."""


class SingularKernelError(SolverError):
    """A collocation point coincides with a quadrature point of another panel."""


class DegenerateDensityError(BriepError):
    """Density is entirely nonpositive; no points can be generated."""


class InfeasibleAllocationError(BriepError):
    """Requested point total cannot cover every boundary component."""


class DuplicateNodeError(BriepError):
    """Two interpolation nodes coincide."""


class PoleNodeCoincidenceError(BriepError):
    """A prescribed pole coincides with an interpolation node."""


class PoleHitError(BriepError):
    """Evaluation point hits a zero of the barycentric denominator."""


class InfinitePotentialError(BriepError):
    """Potential requested exactly at an atom of a discrete measure."""


class NotApplicableError(BriepError):
    """Quantity is undefined for this solution kind (e.g. rate without c2)."""


class RateUndefinedError(BriepError):
    """Too few usable samples to fit a geometric convergence rate."""


class FunctionEvaluationError(BriepError):
    """Target function could not be evaluated at a requested point."""


class NegativeDensityWarning(UserWarning):
    """Solved density had negative entries that were clamped to zero."""


class IllConditionedWarning(UserWarning):
    """Boundary-element system condition estimate exceeds the soft threshold."""


class NearBoundaryWarning(UserWarning):
    """Potential evaluated on a panel away from its quadrature points."""


class DensityGapWarning(UserWarning):
    """A point quantile landed exactly on a zero-density gap boundary."""


class AllocationWarning(UserWarning):
    """Point allocation could not give every component its own point."""


class CutLengthWarning(UserWarning):
    """Cut length outside the empirically effective band for this region size."""


class DensityRatioWarning(UserWarning):
    """Open-cut density ratio below one order of magnitude; cut may be short."""
