"""Exception types shared across the package."""


class ZmsqError(Exception):
    """Base class for all package errors."""


class FormatError(ZmsqError, ValueError):
    """Malformed or out-of-contract input (group text, square file, bad parameters)."""


class ImpossibleError(ZmsqError):
    """The requested object provably does not exist.

    Distinct from :class:`BudgetError`: this is a proof, not a give-up.
    When the proof rests on an involution witness, ``certificate`` carries it.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class BudgetError(ZmsqError):
    """A bounded search ran out of nodes before reaching a conclusion ("unknown")."""


class BuildError(ZmsqError):
    """A construction failed its verification gate or has no implemented route."""
