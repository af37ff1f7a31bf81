"""Exception types raised by the engine.

Every error the interpreter can surface as a ``***`` complaint derives
from KnotforgeError, so dispatch can catch one type.
"""


class KnotforgeError(Exception):
    """Base class for all engine errors."""


class EmptyLink(KnotforgeError):
    pass


class BadIndex(KnotforgeError):
    pass


class BadComponentIndex(BadIndex):
    pass


class BadCount(KnotforgeError):
    pass


class BadFactor(KnotforgeError):
    pass


class BadSpec(KnotforgeError):
    pass


class BadScale(KnotforgeError):
    pass


class ZeroScale(BadScale):
    pass


class ZeroLength(KnotforgeError):
    pass


class ZeroTwist(KnotforgeError):
    pass


class TooFewBeads(KnotforgeError):
    pass


class CloseTooShort(KnotforgeError):
    pass


class JoinOnClosedComponent(KnotforgeError):
    pass


class NoNonadjacentPairs(KnotforgeError):
    pass


class DegenerateLink(KnotforgeError):
    pass


class DegenerateInertia(KnotforgeError):
    """Two inertia eigenvalues coincide; any principal basis is valid."""


class TouchingSegments(KnotforgeError):
    """Non-adjacent segments touch; jitter the link to restore genericity."""


class CoincidentBeads(KnotforgeError):
    """Two beads coincide; jitter the link before computing pair forces."""


class UnsafeStart(KnotforgeError):
    """Relaxation in fast collision mode needs a safe start.

    Rescale with `fitto mindist` (use a value above max-dir) first.
    """


class NoOpenComponents(KnotforgeError):
    pass


class GenericityFailure(KnotforgeError):
    pass


class TooFewComponents(KnotforgeError):
    pass


class DegenerateProjection(KnotforgeError):
    """Projection is non-generic; jitter the link and try again."""


class MultiComponent(KnotforgeError):
    pass


class ParseError(KnotforgeError):
    """Syntax error with a position.

    `position` is a 0-based offset into the offending text.
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)


class EmptyWord(ParseError):
    def __init__(self, message="empty braid word"):
        super().__init__(message, 0)


class BadMagic(KnotforgeError):
    pass


class Truncated(KnotforgeError):
    pass


class BadTubeParams(KnotforgeError):
    pass


class UnsupportedMode(KnotforgeError):
    pass


class OpenComponent(KnotforgeError):
    pass


class WrongArity(ParseError):
    pass


class ConfigError(KnotforgeError):
    pass
