"""
Error handling utilities and exit codes for RIFF.

Exit Codes:
  0: Success
  1: Configuration or schema error (invalid config, missing/duplicate columns)
  2: Data error (unparseable labels, empty classes, unreadable files)
  3: Internal error
"""

import click


# Exit codes
EXIT_SUCCESS = 0
EXIT_CONFIG_ERROR = 1
EXIT_DATA_ERROR = 2
EXIT_INTERNAL_ERROR = 3


class RiffError(Exception):
    """Base exception for RIFF errors."""

    def __init__(self, message: str, exit_code: int = EXIT_INTERNAL_ERROR):
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


class ConfigurationError(RiffError):
    """Configuration-related errors."""

    def __init__(self, message: str):
        super().__init__(message, EXIT_CONFIG_ERROR)


class SchemaError(RiffError):
    """Dataset or rule-file schema mismatches."""

    def __init__(self, message: str):
        super().__init__(message, EXIT_CONFIG_ERROR)


class DataError(RiffError):
    """Invalid or insufficient data."""

    def __init__(self, message: str):
        super().__init__(message, EXIT_DATA_ERROR)


class ModelError(DataError):
    """A model cannot be grown from the given data."""


class MetricError(DataError):
    """A metric is undefined on the given data (e.g. no positives)."""


class FileSystemError(RiffError):
    """File system-related errors."""

    def __init__(self, message: str):
        super().__init__(message, EXIT_DATA_ERROR)


class InternalError(RiffError):
    """Unexpected failures inside the pipeline."""

    def __init__(self, message: str):
        super().__init__(message, EXIT_INTERNAL_ERROR)


def handle_error(error: Exception, verbose: bool = False) -> int:
    """
    Handle errors and return appropriate exit code.

    Args:
        error: The exception to handle
        verbose: Whether to show detailed error information

    Returns:
        Exit code for the error
    """
    if isinstance(error, RiffError):
        click.secho(f"\n✗ Error: {error.message}", fg="red", err=True)
        return error.exit_code
    else:
        click.secho(f"\n✗ Unexpected error: {error}", fg="red", err=True)
        if verbose:
            import traceback
            click.echo(traceback.format_exc(), err=True)
        return EXIT_INTERNAL_ERROR
