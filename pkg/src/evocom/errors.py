"""Exception hierarchy shared by the generator, the evaluators and the CLI."""


class EvocomError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(EvocomError, ValueError):
    """Invalid scenario parameters, distributions or CLI options.

    ``key`` holds the dotted path of the offending configuration entry when
    one is known (e.g. ``"size_dist.sigma"``).
    """

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class ParseError(ConfigurationError):
    """A serialized file could not be read back."""

    def __init__(self, message: str, path=None, line: int | None = None):
        where = ""
        if path is not None:
            where = str(path)
            if line is not None:
                where += f":{line}"
            where += ": "
        self.path = path
        self.line = line
        super().__init__(where + message)


class EvaluationError(EvocomError, ValueError):
    """A score is undefined for the given inputs (empty domain, mismatched items)."""
