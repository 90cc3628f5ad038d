"""Exception hierarchy shared by the library and the CLI."""


class AblocError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(AblocError, ValueError):
    """Invalid or unparseable experiment configuration."""

    def __init__(self, message, field=None, line=None):
        self.reason = message
        self.field = field
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"{field}: "
        super().__init__(prefix + message)


class NumericError(AblocError, ArithmeticError):
    """A numerical routine could not produce a finite answer."""


class SingularMatrixError(NumericError):
    """A linear system that must be positive definite is singular."""


class InfeasibleError(AblocError, ValueError):
    """The requested quantity does not exist for the given inputs."""
