"""Exception classes raised across the package.

The class names double as the one-word diagnostics printed by the CLI.
"""


class HigherARError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HigherARError, ValueError):
    pass


class RepInfinite(HigherARError):
    """Orbit generation ran past the Dynkin safety bound."""


class ZeroModule(HigherARError, ValueError):
    pass


class NotIndecomposable(HigherARError, ValueError):
    pass


class UnsupportedField(HigherARError):
    """End(X)/rad End(X) is a division algebra bigger than the ground field."""


class HeterogeneousFactors(HigherARError):
    pass


class SliceMismatch(HigherARError):
    pass


class SliceLeak(HigherARError):
    pass


class ShapeMismatch(HigherARError, ValueError):
    pass


class NotRadical(HigherARError, ValueError):
    pass


class NonRadicalTail(HigherARError, ValueError):
    pass


class Injective(HigherARError, ValueError):
    """A sequence was requested starting at an injective label."""


class ConstructionFailed(HigherARError):
    pass


class VerificationFailed(HigherARError):
    pass
