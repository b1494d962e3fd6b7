"""Error taxonomy shared by the whole package.

Three kinds of failure are distinguished so that callers (and the CLI)
can map them to exit codes: bad input data, violated operation
contracts, and exceeded resource budgets.
"""


class FamilyError(Exception):
    """Base class for all package errors."""


class InputError(FamilyError):
    """Malformed or out-of-range input (bad elements, bad parameters)."""


class ContractError(FamilyError):
    """A documented precondition of an operation does not hold."""


class ResourceError(FamilyError):
    """A capacity or budget limit was exceeded.

    May carry partial results: ``best_size``, ``best_family`` and
    ``upper_bound`` are set by the exact search when a node or time
    budget runs out.
    """

    def __init__(self, message, *, best_size=None, best_family=None, upper_bound=None):
        super().__init__(message)
        self.best_size = best_size
        self.best_family = best_family
        self.upper_bound = upper_bound
