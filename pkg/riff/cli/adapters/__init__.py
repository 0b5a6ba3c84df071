"""Adapters for integrating with backend modules."""

__all__ = []

