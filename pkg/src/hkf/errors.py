"""Exception types shared across the package."""


class HKFError(Exception):
    """Base class for all package errors."""


class DiagramError(HKFError):
    """A planar diagram failed structural validation."""


class MoveError(HKFError):
    """A Reidemeister move was requested at an illegal site."""


class ConstructionError(HKFError):
    """Construction parameters are out of range or inconsistent."""


class ParseError(HKFError):
    """A PD-code text stream could not be parsed."""
