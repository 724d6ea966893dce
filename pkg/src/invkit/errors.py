class VerificationError(RuntimeError):
    """An exact self-check failed; this signals a bug, not bad input."""


class NotInvariantError(ValueError):
    pass
