"""Exception types raised by the package."""


class InvalidInputError(ValueError):
    """Input violates a documented precondition (c = 0, zero initial value, ...)."""


class ForbiddenSetError(ArithmeticError):
    """A closed form hit a vanishing denominator.

    ``kind`` is ``"A"`` or ``"B"`` and ``index`` is the ``n`` for which
    ``A_n`` or ``B_n`` vanished.
    """

    def __init__(self, kind: str, index: int, message: str | None = None):
        self.kind = kind
        self.index = index
        super().__init__(message or f"{kind}_{index} = 0: initial values lie in the forbidden set")
