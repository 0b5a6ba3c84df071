"""CLI module for RIFF."""

__all__ = []
