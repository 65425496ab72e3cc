"""Exception hierarchy shared across the package."""


class ArgumentError(ValueError):
    """An operation was called with arguments violating its preconditions."""


class FormatError(ValueError):
    """A serialized object (file, header, token) failed to parse."""


class UnanswerableError(RuntimeError):
    """An oracle query cannot be answered: required ground truth is missing."""


class ContractError(RuntimeError):
    """A caller promise (query invariant, feasibility guarantee) is violated."""


class InternalError(RuntimeError):
    """A state the algorithms guarantee unreachable was reached anyway."""
