"""Exception hierarchy shared by all qmont modules."""


class QMontError(Exception):
    """Base class for every error raised by qmont."""


class DomainError(QMontError, ValueError):
    """An argument lies outside the domain of the operation."""


class EvalError(QMontError, ArithmeticError):
    """A user function could not be evaluated to a finite real number."""


class ConvergenceError(QMontError, ArithmeticError):
    """An iterative limit did not settle within the allowed number of steps."""


class CapError(QMontError, OverflowError):
    """A lattice index would exceed the configured term cap."""


class ExprSyntaxError(QMontError, SyntaxError):
    """Malformed expression source.

    ``offset`` is the byte offset of the offending token and ``expected``
    the set of token kinds that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = message
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(f"{detail} at offset {offset}")
        # SyntaxError.__init__ resets these when given a single argument
        self.offset = offset
        self.msg = detail

    def __str__(self) -> str:
        return f"{self.msg} at offset {self.offset}"
