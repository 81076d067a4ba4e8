"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class ValidationError(ValueError):
    """Malformed or inconsistent input (CLI exit code 1)."""


class StructureMismatchError(ValidationError):
    """Objects built over incompatible groups, sides, or contexts."""


class PreconditionError(ValidationError):
    """An operation's stated precondition does not hold."""


class GuardError(RuntimeError):
    """Numerical guard tripped (CLI exit code 2)."""


class SizeGuardError(GuardError):
    """Problem too large for a dense brute-force oracle."""


class NotCauchyError(GuardError):
    """Sequence of spaces is not Cauchy at the requested tolerance."""
