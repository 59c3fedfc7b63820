"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid protocol parameters or malformed inputs (CLI exit code 2)."""


class IntegrityError(RuntimeError):
    """A protocol invariant broke at runtime, e.g. a decoded count outside
    0..M or an incomplete answer set (CLI exit code 3)."""


class AuditInfeasibleError(RuntimeError):
    """An exhaustive audit would exceed the enumeration cap."""
