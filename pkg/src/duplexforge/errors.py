"""Exception types shared across the toolkit."""


class ConfigError(ValueError):
    """An experiment configuration is invalid or incomplete."""


class ScenarioError(ConfigError):
    """A scenario file failed validation; carries every error found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
