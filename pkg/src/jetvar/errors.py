"""Exception hierarchy shared by every jetvar module."""


class JetvarError(Exception):
    """Base class for all errors raised by jetvar."""


class ParseError(JetvarError, ValueError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
            if text is not None:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class UndeclaredError(JetvarError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class OrderOverflowError(JetvarError):
    """An operation would need jet coordinates beyond the declared maximum order."""


class SpaceMismatchError(JetvarError, ValueError):
    pass


class UnboundVariableError(JetvarError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class AnsatzTooLargeError(JetvarError):
    pass


class DegenerateOperatorError(JetvarError, ValueError):
    pass


class NotSymmetricError(JetvarError, ValueError):
    pass


class SpanningError(JetvarError, ValueError):
    pass


class StructureConstantsError(JetvarError, ValueError):
    """Structure constants violate antisymmetry or the Jacobi identity."""


class ModelFileError(JetvarError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
