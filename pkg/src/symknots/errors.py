"""Exception types shared by the package."""


class SymknotsError(ValueError):
    """Raised when an input violates an operation's preconditions.

    ``code`` is a short machine-readable tag such as ``"bad-grid"`` or
    ``"degenerate"``; the CLI maps it onto exit codes.
    """

    def __init__(self, code, message=None):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)
