"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class EndpointError(ArithmeticError):
    """A ratio is undefined (0/0) at a support endpoint."""


class SingularityError(ArithmeticError):
    """A derivative vanishes where it is used as a divisor."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class UnsupportedSamplerError(NotImplementedError):
    """No Monte Carlo sampler covers the requested sample."""


class ScenarioError(ValueError):
    """A scenario file or description failed validation."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
        self.reason = message


class BracketError(ArithmeticError):
    """A root-finding bracket does not contain the target value."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
