class TmrError(Exception):
    """Base class for errors raised by tmrvoter."""


class UsageError(TmrError, ValueError):
    """A caller passed arguments outside an operation's contract."""


class DomainError(TmrError):
    """The request is well-formed but has no defined answer (e.g. no fault sites)."""


class NetlistError(TmrError, ValueError):
    """A netlist failed validation. ``violations`` lists every problem found."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))
