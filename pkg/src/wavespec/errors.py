"""Exception hierarchy shared across the package.

The split mirrors the CLI exit-code contract: configuration and domain
problems (bad inputs, impossible settings) are distinct from numerical
failures encountered while computing with valid inputs.
"""


class WaveSpecError(Exception):
    """Base class for all package errors."""


class DomainError(WaveSpecError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(WaveSpecError, ValueError):
    """A configuration value is invalid or inconsistent (CLI exit code 2)."""


class NumericalError(WaveSpecError, RuntimeError):
    """A computation failed numerically on valid inputs (CLI exit code 3)."""
