"""Exception hierarchy shared by every robust_doe module."""


class DoeError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgument(DoeError, ValueError):
    pass


class EmptyInput(InvalidArgument):
    pass


class DegenerateSignal(DoeError, ArithmeticError):
    """SNR would be infinite (log of zero)."""


class DivisionByZero(DoeError, ZeroDivisionError):
    pass


class UnknownArray(DoeError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown array"


class LevelMismatch(DoeError, ValueError):
    pass


class ColumnOverflow(DoeError, ValueError):
    pass


class IndexOutOfRange(DoeError, IndexError):
    pass


class ZeroRange(DoeError, ArithmeticError):
    """A column has max == min, so min-max normalization is undefined."""


class InvalidRho(InvalidArgument):
    pass


class InvalidWeights(InvalidArgument):
    pass


class UnknownFactor(DoeError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown factor"


class NoErrorTerm(DoeError, ArithmeticError):
    pass


class SpecError(DoeError, ValueError):
    """Design spec failed validation; carries every diagnostic found."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class ShapeError(DoeError, ValueError):
    """Input file does not have the dimensions the design requires."""
