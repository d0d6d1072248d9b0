"""Fracturing design recommendation toolkit."""

__version__ = "0.1.0"
