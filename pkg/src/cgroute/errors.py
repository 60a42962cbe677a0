"""Exception hierarchy shared across the package."""


class CgRouteError(Exception):
    """Base class for all package errors."""


class InputError(CgRouteError):
    """Invalid user-supplied data (bad file, bad parameter, empty scenario)."""


class FormatError(InputError):
    """A scenario/trace file failed strict parsing.

    Carries the offending line number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ContractError(CgRouteError):
    """An API precondition was violated by the caller."""


class SolverError(CgRouteError):
    """The LP backend failed on a problem that is feasible by construction."""
