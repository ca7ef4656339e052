"""Exception types shared across the package."""


class PinquadError(Exception):
    """Base class for all library errors."""


class TieInSimplex(PinquadError):
    """Two vertices of one simplex share a rank."""


class NotPseudoManifold(PinquadError):
    """Some (n-1)-simplex has zero or more than two top cofaces."""


class BoundaryNotFull(PinquadError):
    """The boundary subcomplex is not full in the ambient complex."""


class OrderingViolation(PinquadError):
    """Boundary vertices do not precede interior vertices in some simplex."""


class NeedsSubdivision(PinquadError):
    """Manifold conditions fail but one barycentric subdivision repairs them."""

    def __init__(self, reasons):
        super().__init__("; ".join(reasons))
        self.reasons = tuple(reasons)


class EmptyBoundary(PinquadError):
    """Operation requires a nonempty boundary."""


class UnknownFixture(PinquadError):
    """No fixture with the requested name."""


class ComplexMismatch(PinquadError):
    """Cochains live on different complexes."""


class RingMismatch(PinquadError):
    """Cochains have incompatible coefficient rings."""


class OrientationRequired(PinquadError):
    """Signed integration needs an oriented manifold."""


class NotACocycle(PinquadError):
    """Argument must be a cocycle."""


class NotRelative(PinquadError):
    """Argument must vanish on the subcomplex."""


class WuObstruction(PinquadError):
    """v2 != 0; carries a witness cocycle."""

    def __init__(self, witness):
        super().__init__("Sq^2 obstruction is nonzero")
        self.witness = witness


class ConstraintViolation(PinquadError):
    """A basis value violates 2*q_j = 2*int(Sq^1 p_j)."""

    def __init__(self, index):
        super().__init__(f"basis value {index} violates the 2q constraint")
        self.index = index


class SpinOnNonorientable(PinquadError):
    """Spin mode requires an oriented manifold."""


class NotClosedSurface(PinquadError):
    """Operation is defined for closed surfaces only."""


class DegenerateSum(PinquadError):
    """Gauss sum magnitude check failed (input is not quadratic)."""


class NotNeatlyEmbedded(PinquadError):
    """Extension by zero of some cocycle is not a relative cocycle."""


class PairMismatch(PinquadError):
    """G-group pairs live on different pairs or degrees."""


class BudgetExceeded(PinquadError):
    """Brute-force enumeration would exceed the size budget."""


class DegreeZero(PinquadError):
    """Push-forward needs a map of odd mod-2 degree."""


class ParseError(PinquadError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
