class QTripletError(Exception):
    """Base class for all estimator and pipeline errors."""


class DomainError(QTripletError, ValueError):
    """Arguments outside the domain of a deformed function or density."""


class ParseError(QTripletError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class FitError(QTripletError):
    """A linearization sweep or spectrum fit could not produce a meaningful result."""


class StageError(QTripletError):
    """An estimator failure tagged with the pipeline stage it came from."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        self.message = message
        super().__init__(f"[{stage}] {message}")
