"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid run configuration or input file."""


class PositivityLost(ArithmeticError):
    """Density (or the sound-speed variable) left the physical range."""
