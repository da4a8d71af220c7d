"""Exception hierarchy for hexpack."""


class HexpackError(Exception):
    """Base class for all hexpack errors."""


class DegenerateInput(HexpackError):
    """Input points coincide or are otherwise degenerate."""


class NotAFlowerConfiguration(HexpackError):
    """Six points do not satisfy the flower condition (multi-ratio -1,
    concyclic, positively ordered)."""


class NonPositiveRadius(HexpackError):
    """A requested or derived circle radius is not positive."""


class NumericallyParabolic(HexpackError):
    """The two fixed points of a Moebius map coincide within tolerance."""


class IdentityMap(HexpackError):
    """Operation undefined for the identity Moebius map."""


class MissingEdge(HexpackError):
    """An edge value required by the operation is absent from the field."""


class PoleOnWindow(HexpackError):
    """The closed-form field has a tangent pole on the requested window."""

    def __init__(self, message, edges=()):
        super().__init__(message)
        self.edges = tuple(edges)


class SingularPair(HexpackError):
    """1 + a*b = 0: the third hexagon value is not determined."""


class MonodromyViolation(HexpackError):
    """Continuation around a hexagon does not return to the seed value."""


class FieldInconsistent(HexpackError):
    """Cycle closure of the frame propagation exceeds tolerance."""


class NotImmersed(HexpackError):
    """A circle degenerates or an edge cross-ratio is not positive imaginary."""


class ClosureFailure(HexpackError):
    """Tangency chaining of a spiral failed to close up."""


class FarFromRegular(HexpackError):
    """Edge cross-ratio too far from i*sqrt(3) for the small-deviation expansion."""


class CriticalPoint(HexpackError):
    """|f'| too small for a stable Schwarzian derivative."""


class OutOfValidatedDomain(HexpackError):
    """Argument outside the validated evaluation domain."""


class ConstantCase(HexpackError):
    """Linear-coefficient normalization requested for a constant Schwarzian."""
