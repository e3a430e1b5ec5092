"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A physical or numerical parameter is outside its valid domain."""


class ConfigError(ValueError):
    """A run configuration document is malformed or incomplete."""


class SingleDomainWarning(UserWarning):
    """Geometry is outside the range where a single magnetic domain is safe."""
