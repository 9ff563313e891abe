"""Exception types raised across the toolkit."""


class CableWrenchError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgument(CableWrenchError, ValueError):
    pass


class DegenerateCable(CableWrenchError):
    """A cable has (near) zero length, so its direction is undefined."""


class SingularWrist(CableWrenchError):
    """The wrist forward Jacobian is singular for the given parameters."""


class InvalidPairing(CableWrenchError, ValueError):
    pass


class EmptyBox(CableWrenchError, ValueError):
    """Tension lower bound exceeds the upper bound for some cable."""


class NonPositiveDuration(CableWrenchError, ValueError):
    pass


class LPError(CableWrenchError):
    """The simplex solver failed (unbounded or iteration limit)."""


class ConfigError(CableWrenchError):
    pass


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class MissingField(ValidationError):
    def __init__(self, field: str):
        super().__init__(field, "required field is missing")
