"""CLI command implementations."""

__all__ = []

