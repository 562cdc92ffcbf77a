"""Willmore Legendrian surfaces in the pseudoconformal 5-sphere."""

__version__ = "0.1.0"
