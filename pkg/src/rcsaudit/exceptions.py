"""Exception types raised across the toolkit."""


class AuditError(Exception):
    """Base class for all toolkit errors."""


class MissingComponentError(AuditError, KeyError):
    """A gate site, qubit pair or measured qubit has no error rate."""

    def __init__(self, kind, component):
        self.kind = kind
        self.component = component
        super().__init__(f"no {kind} error rate for {component!r}")

    def __str__(self):
        return self.args[0]


class MissingAmplitudesError(AuditError, ValueError):
    """An estimator needs ideal probabilities that were not supplied."""


class EmptySelectionError(AuditError, ValueError):
    pass


class DegenerateDesignError(AuditError, ValueError):
    pass


class ParseError(AuditError, ValueError):
    """Malformed input; ``line`` is 1-based when known."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        if source is not None:
            where = f"{source}:{line}:" if line is not None else f"{source}:"
        else:
            where = f"line {line}:" if line is not None else ""
        super().__init__(f"{where} {message}" if where else message)


class ChecksumError(AuditError):
    """Shipped fixture bytes do not match the manifest."""


class SimulationError(AuditError, ValueError):
    pass
