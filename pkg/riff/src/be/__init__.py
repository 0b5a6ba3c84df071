"""Computational back end of the RIFF pipeline."""
