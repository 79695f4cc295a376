class ImputeError(Exception):
    """Base class for every error raised by l1impute."""


class ParameterError(ImputeError, ValueError):
    pass


class DataError(ImputeError, ValueError):
    pass


class DomainError(ImputeError, ValueError):
    """A theorem hypothesis does not hold for the supplied parameters."""

    def __init__(self, hypothesis: str) -> None:
        super().__init__(f"theorem hypothesis violated: {hypothesis}")
        self.hypothesis = hypothesis


class ConfigError(ImputeError, ValueError):
    pass
