"""Exception types shared across the package."""


class MPQuotError(Exception):
    """Base class for all mpquot errors."""


class PoleProjection(MPQuotError):
    """Stereographic projection requested at (or too close to) the pole."""


class NotOrthogonal(MPQuotError):
    """A matrix expected to be orthogonal fails the orthogonality check."""


class OrderExceeded(MPQuotError):
    """Group closure grew past the allowed order (non-finite or non-discrete input)."""


class AmbiguousGenerators(MPQuotError):
    """Two group elements are neither clearly equal nor clearly distinct."""


class BadParameters(MPQuotError):
    """Invalid construction parameters (group family, dimensions, grids, ...)."""


class SingularBasePoint(MPQuotError):
    """The base point is fixed (or nearly fixed) by a nontrivial group element."""


class DimensionTooSmall(MPQuotError):
    """The construction needs sphere dimension n >= 3."""


class OnOrbit(MPQuotError):
    """Evaluation point coincides with an orbit point."""


class AtSingularity(MPQuotError):
    """Evaluation point coincides with a metric singularity (a center)."""


class DegenerateTriple(MPQuotError):
    """Two of the three points in a distance-identity check coincide."""
