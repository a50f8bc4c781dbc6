"""Exception types shared across the package."""


class PadicError(Exception):
    """Base class for errors raised by padicdual."""


class PrimeMismatch(PadicError, ValueError):
    pass


class NonUnit(PadicError, ArithmeticError):
    pass


class NotASimpleRoot(PadicError, ValueError):
    pass


class DimensionMismatch(PadicError, ValueError):
    pass


class SingularMatrix(PadicError, ValueError):
    pass


class InvalidForm(PadicError, ValueError):
    """A factored form failed its structural checks."""


class NotAMember(PadicError, ValueError):
    pass


class PrecisionExhausted(PadicError):
    """The working precision is too small to decide the question.

    Raising the precision (``N``) and re-running is the usual remedy.
    """


class NotContractive(PadicError):
    """No functional on the whole group restricts to the prescribed values.

    ``index`` is the position of the first generator whose value cannot be
    met; the certificate holds modulo ``p**precision``.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotFound(PadicError):
    pass
