"""Conversational exploration assistant for codebook-annotated tabular data."""

__version__ = "0.1.0"
