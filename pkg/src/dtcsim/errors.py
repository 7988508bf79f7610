"""Exception types shared across the package."""


class ConfigError(Exception):
    """Invalid experiment configuration; carries the offending key path."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class NumericalError(Exception):
    """A numerical sanity check failed (malformed generator, state out of tolerance)."""
