"""Exception hierarchy shared by every module of the engine."""


class SuperOrbitError(Exception):
    """Base class for engine errors."""


class SignatureError(SuperOrbitError, ValueError):
    """Operands live in different rings, or an index is out of range."""


class ParityError(SuperOrbitError, ValueError):
    """An operation received an element or matrix of the wrong parity."""


class NotInvertibleError(SuperOrbitError, ArithmeticError):
    pass


class NonRegularError(SuperOrbitError, ValueError):
    """Eigenvalues of the target diagonal element collide."""


class NotInOrbitError(SuperOrbitError, ValueError):
    pass


class UnsupportedFieldError(SuperOrbitError, ValueError):
    """The computation would leave the rationals (irrational eigenvalues)."""


class DegreeOverflowError(SuperOrbitError, ValueError):
    pass


class ParseError(SuperOrbitError, ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column = line, col
        super().__init__(f"{message} (line {line}, column {col})")
