"""Averaged gap statistics of the fractional parts {n alpha}."""

__version__ = "0.1.0"
