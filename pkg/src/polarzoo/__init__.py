"""Exact finite geometry of the classical polar spaces."""
__version__ = "0.1.0"
