"""Exception hierarchy.

Validation-type errors subclass ``ValueError`` so callers that only care
about "bad input" can catch that.  The CLI maps :class:`NumericalInvariantError`
to its own exit code.
"""


class ClosedSumsError(Exception):
    pass


class InvalidInputError(ClosedSumsError, ValueError):
    pass


class ShapeError(InvalidInputError):
    pass


class DomainError(InvalidInputError):
    """Argument outside the domain of the operation (zero vector, off-domain point)."""


class OutOfRangeError(InvalidInputError):
    """Radius or time point outside the sampled grid."""


class GridAlignmentError(InvalidInputError):
    pass


class NotInRangeError(InvalidInputError):
    """Right-hand side is not in the image of the operator (within tolerance)."""


class DegenerateInputError(InvalidInputError):
    """Zero operator, trivial subspace sum, zero weight mass, zero measure mass."""


class InconsistentDecompositionError(InvalidInputError):
    pass


class NumericalInvariantError(ClosedSumsError, ArithmeticError):
    """A post-condition that must hold up to rounding was violated."""
