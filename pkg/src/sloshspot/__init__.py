"""Two-dimensional sloshing modes whose free-surface high spots lie inside the free surface.

Subpackages: ``kernel`` (field evaluation), ``geometry`` (saddles, level curves,
domains, high spots), ``verify`` (residuals and reference comparison).
"""
__version__ = "0.1.0"
