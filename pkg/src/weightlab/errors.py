"""Exception hierarchy.

Every error raised on purpose by weightlab derives from :class:`WeightlabError`,
which the command line maps to exit status 2.
"""


class WeightlabError(Exception):
    pass


class VariableError(WeightlabError):
    """A polynomial mentions a variable that is not allowed in this context."""


class SubstitutionError(WeightlabError):
    """A substitution would capture a carried-through variable."""


class PreconditionError(WeightlabError):
    """An operation was called outside its domain (e.g. a degree bound fails)."""


class HomogeneityError(WeightlabError):
    pass


class ParseError(WeightlabError):
    def __init__(self, message, line=1, column=1, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = f"line {line}, column {column}"
        if source:
            where = f"{source}: {where}"
        super().__init__(f"{where}: {message}")


class WorkspaceError(WeightlabError):
    pass
