"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: parameter problems are usage errors,
malformed or unusable inputs are data errors, and a consistency error means
an internal cross-check failed (never silently ignored).
"""


class GraphcurvError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(GraphcurvError):
    """A caller-supplied parameter violates an operation's precondition."""


class DataError(GraphcurvError):
    """Input data is malformed or structurally unusable (parse failures,
    disconnected graphs where connectivity is required, and so on)."""


class ConsistencyError(GraphcurvError):
    """An internal redundancy check disagreed with the primary computation."""
