"""Exception hierarchy.

Every library-level failure derives from :class:`PwprojError`.  The CLI maps
:class:`ParseError` (and malformed files generally) to exit code 2 and all
other domain errors to exit code 1.
"""


class PwprojError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PwprojError):
    """Malformed textual or JSON input."""


# -- exact numbers -----------------------------------------------------------

class DivisionByZero(PwprojError, ZeroDivisionError):
    pass


class MixedRadicands(PwprojError):
    """Operands carry different square roots and cannot be combined.

    Comparison across radicands is always possible; arithmetic is not.
    """


class NotPrime(PwprojError):
    pass


class SquareFactorTooLarge(PwprojError):
    """A radicand has a square factor beyond the trial-division bound."""


# -- matrices ----------------------------------------------------------------

class NotUnimodular(PwprojError):
    """Matrix determinant is not exactly 1."""


class IdentityMatrix(PwprojError):
    pass


class PoleAtPoint(PwprojError):
    pass


class NotInUpperHalfPlane(PwprojError):
    pass


# -- piecewise maps ----------------------------------------------------------

class DiscontinuousAtBreakpoint(PwprojError):
    pass


class PoleInsidePiece(PwprojError):
    pass


class NotIncreasing(PwprojError):
    pass


class NotBijective(PwprojError):
    pass


class AtBreakpointWithoutSide(PwprojError):
    pass


class NotABreakpoint(PwprojError):
    pass


class EmptyPrimeSet(PwprojError):
    pass


# -- surgery -----------------------------------------------------------------

class MapsXToInfinity(PwprojError):
    pass


class AffineInput(PwprojError):
    pass


class ScaleIsOne(PwprojError):
    pass


class IrrationalTransitionData(PwprojError):
    pass


class ParabolicTransition(PwprojError):
    pass


# -- certificates ------------------------------------------------------------

class DepthTooShallow(PwprojError):
    pass


class NoSeparatingPrime(PwprojError):
    pass


class GeneratorOutsideRing(PwprojError):
    pass


class IntervalHitsFixedPoint(PwprojError):
    pass


class SharedFixedPoint(PwprojError):
    pass
