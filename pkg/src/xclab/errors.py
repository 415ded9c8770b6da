"""Exception types shared across the package."""


class XclabError(Exception):
    """Base class for all xclab errors."""


class FormatError(XclabError):
    """A text file (MAT / POLY / DECOMP / JSON sidecar) is malformed."""


class ValidationError(XclabError):
    """Input data violates a documented invariant (bad polytope, negative slack, ...)."""


class NotPyramidError(XclabError):
    """A slack matrix has no pyramid normal form."""


class BudgetExceeded(XclabError):
    """The exact covering solver ran out of its node budget before proving a value."""


class PaperContradictionError(XclabError):
    """An audit found an exact undersized factorization passing every claim.

    This is unreachable for correct inputs; reaching it means an implementation
    bug and must fail CI (exit code 3 in the CLI).
    """

    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = reports or []
